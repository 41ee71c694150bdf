#include "si/si.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

using json = nlohmann::json;
using namespace si;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kUsage = 2, kFailure = 3 };

struct Output {
    bool as_json = false;
    std::string command;
    json inputs = json::object();
    json result = json::object();
    std::ostringstream text;
    std::map<int, std::string> provenance;
};

json poly_json(const IntPoly& f)
{
    json a = json::array();
    for (int i = 0; i <= f.degree(); ++i) a.push_back(f.coeff(i).get_str());
    return a;
}

std::string sci(const Real& v) { return v.str(3, std::ios_base::scientific); }

json value_json(const EvalResult& r, int digits)
{
    return {{"re", to_decimal(r.value.re, digits)},
            {"im", to_decimal(r.value.im, digits)},
            {"err", sci(r.err)},
            {"terms", r.terms_used},
            {"abs_q", sci(r.abs_q)},
            {"point", {{"a", r.point.a.get_str()}, {"b", r.point.b.get_str()}, {"D", r.point.D.get_str()}}}};
}

std::string complex_text(const Complex& z, int digits)
{
    std::string s = to_decimal(z.re, digits);
    if (z.im.is_zero()) return s;
    return s + (z.im < 0 ? " - " : " + ") + to_decimal(boost::multiprecision::abs(z.im), digits) + "i";
}

std::string value_text(const EvalResult& r, int digits)
{
    bool real = boost::multiprecision::abs(r.value.im) <= r.err;
    std::string s = real ? to_decimal(r.value.re, digits) : complex_text(r.value, digits);
    return s + "  (err " + sci(r.err) + ", " + std::to_string(r.terms_used) + " terms)";
}

void note_level(Output& out, LevelRegistry& reg, int N) { out.provenance[N] = to_string(reg.get(N, 0).provenance); }

std::shared_ptr<const CurveRecord> record_for(Output& out, LevelRegistry& reg, int N, long order)
{
    auto e = reg.get(N, order);
    out.provenance[N] = to_string(e.provenance);
    return e.record;
}

long order_for_m(long m) { return std::max(kDefaultOrder, required_order(m)); }

std::string poly_diff(const IntPoly& got, const IntPoly& want)
{
    std::ostringstream s;
    for (int i = 0; i <= std::max(got.degree(), want.degree()); ++i)
        if (got.coeff(i) != want.coeff(i)) s << "    x^" << i << ": computed " << got.coeff(i) << ", expected " << want.coeff(i) << "\n";
    return s.str();
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn)
{
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < std::max(1u, jobs); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

CMPoint parse_form(const std::string& s)
{
    std::vector<Int> v;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) v.emplace_back(part);
    if (v.size() != 3) throw std::invalid_argument("--form expects a,b,c");
    QuadForm f{v[0], v[1], v[2]};
    if (f.a <= 0 || f.disc() >= 0) throw std::invalid_argument("--form must be positive definite");
    return cm_root(f);
}

struct VerifyLine {
    std::string key;
    bool ok = false;
    std::string detail;
};

int finish_verify(Output& out, const std::vector<VerifyLine>& lines)
{
    int fails = 0;
    json arr = json::array();
    for (const auto& l : lines) {
        out.text << (l.ok ? "ok    " : "FAIL  ") << l.key << "\n";
        if (!l.ok) {
            ++fails;
            out.text << l.detail;
        }
        arr.push_back({{"case", l.key}, {"ok", l.ok}, {"detail", l.detail}});
    }
    out.text << lines.size() - fails << "/" << lines.size() << " match\n";
    out.result["cases"] = arr;
    out.result["failures"] = fails;
    return fails ? kMismatch : kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Modular-curve polynomials, CM values and class polynomials for the genus-one levels"};
    app.require_subcommand(1);
    app.fallthrough();
    Output out;
    app.add_flag("--json", out.as_json, "Emit a JSON envelope");

    int level = 0, digits = 30, mp_digits = 0, hg_digits = 40, order = 0;
    long m = 0, dk = 0, sqrt_m = 0;
    bool factor = false, force = false;
    std::string form, appendix;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::optional<int> vlevel;
    std::optional<long> vm;

    auto* levels = app.add_subcommand("levels", "List the genus-one levels");
    auto* pq = app.add_subcommand("pq", "P and Q with Phi_m(x, X = x) = P(x) + y Q(x)");
    auto* phi = app.add_subcommand("phi", "Coefficients of Phi_m as polynomials in x and y");
    auto* gen = app.add_subcommand("genpoly", "Generating polynomial P^2 + ... - E Q^2");
    for (auto* s : {pq, phi, gen}) {
        s->add_option("--level", level, "Level N")->required();
        s->add_option("--m", m, "Index m")->required()->check(CLI::Range(2L, 1000L));
    }
    gen->add_flag("--factor", factor, "Factor over Z");

    auto* ev = app.add_subcommand("eval", "x and y at a CM point");
    ev->add_option("--level", level, "Level N")->required();
    auto* grp = ev->add_option_group("point");
    grp->add_option("--sqrt", sqrt_m, "Evaluate at i sqrt(M/N)");
    grp->add_option("--form", form, "Evaluate at the root of the form a,b,c");
    grp->require_option(1);
    ev->add_option("--digits", digits, "Decimal digits")->check(CLI::Range(10, 5000));

    auto* mp = app.add_subcommand("minpoly", "Minimal polynomial of x_N at the Heegner point of discriminant dK");
    auto* hg = app.add_subcommand("heegner", "Heegner points for dK on the level-N curve");
    for (auto* s : {mp, hg}) {
        s->add_option("--level", level, "Level N")->required();
        s->add_option("--dk", dk, "Fundamental discriminant")->required();
        s->add_flag("--force", force, "Allow composite levels");
    }
    mp->add_option("--digits", mp_digits, "Decimal digits (0 chooses automatically)");
    hg->add_option("--digits", hg_digits, "Decimal digits")->check(CLI::Range(10, 5000));

    auto* vf = app.add_subcommand("verify", "Compare against the appendix tables");
    vf->add_option("--appendix", appendix, "A, B, C or D")->required()->check(CLI::IsMember({"A", "B", "C", "D"}));
    vf->add_option("--level", vlevel, "Only this level");
    vf->add_option("--m", vm, "Only this m (or dK for D)");
    vf->add_option("--jobs", jobs, "Worker threads for A and B");

    auto* bs = app.add_subcommand("bootstrap", "Regenerate a curve record and write it to the data directory");
    bs->add_option("--level", level, "Level N (0 for all)")->required();
    bs->add_option("--order", order, "Number of q-expansion terms")->required()->check(CLI::Range(20, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    LevelRegistry& reg = default_registry();
    auto t0 = std::chrono::steady_clock::now();
    int rc = kOk;
    try {
        if (*levels) {
            out.command = "levels";
            json arr = json::array();
            for (int N : genus_one_levels()) {
                Cubic k = reg.curve_coeffs(N);
                bool vendored = std::filesystem::exists(record_path(N, reg.dir()));
                arr.push_back({{"N", N}, {"prime", is_prime(N)}, {"A", k.A.get_str()}, {"B", k.B.get_str()}, {"C", k.C.get_str()},
                               {"D", k.D.get_str()}, {"E", k.E.get_str()}, {"record", vendored ? "vendored" : "bootstrapped"}});
                out.text << N << (is_prime(N) ? "  prime " : "        ") << " [" << k.A << ", " << k.B << ", " << k.C << ", " << k.D << ", " << k.E
                         << "]" << (vendored ? "" : "  (no record on disk)") << "\n";
            }
            out.result["levels"] = arr;
        } else if (*pq || *phi || *gen) {
            out.command = pq->parsed() ? "pq" : phi->parsed() ? "phi" : "genpoly";
            out.inputs = {{"level", level}, {"m", m}};
            auto rec = record_for(out, reg, level, order_for_m(m));
            if (*phi) {
                ModularPolynomial p = phi_polynomial(*rec, m);
                json arr = json::array();
                for (long j = 0; j <= p.degree(); ++j) {
                    const auto& c = p.coeffs[j];
                    arr.push_back({{"p", poly_json(c.p)}, {"q", poly_json(c.q)}});
                    out.text << "X^" << j << ": " << c.p.to_string() << (c.q.is_zero() ? "" : " + y (" + c.q.to_string() + ")") << "\n";
                }
                out.result["coefficients"] = arr;
            } else {
                PQPair r = pq_extract(*rec, m);
                out.result["P"] = poly_json(r.P);
                out.result["Q"] = poly_json(r.Q);
                if (*pq) {
                    out.text << "P = " << r.P << "\nQ = " << r.Q << "\n";
                } else {
                    IntPoly g = generating_polynomial(r.P, r.Q, *rec);
                    out.result["R"] = poly_json(g);
                    out.text << "R = " << g << "\n";
                    if (factor) {
                        FactoredPoly fp = factor_over_z(g);
                        json fs = json::array();
                        out.text << "content " << fp.content << "\n";
                        for (const auto& [f, e] : fp.factors) {
                            fs.push_back({{"factor", poly_json(f)}, {"multiplicity", e}});
                            out.text << "  (" << f << ")" << (e > 1 ? "^" + std::to_string(e) : "") << "\n";
                        }
                        out.result["content"] = fp.content.get_str();
                        out.result["factors"] = fs;
                    }
                }
            }
        } else if (*ev) {
            out.command = "eval";
            CMPoint pt = sqrt_m ? sqrt_point(sqrt_m, level) : parse_form(form);
            out.inputs = {{"level", level}, {"digits", digits}, {"form", pt.form().to_string()}};
            PrecisionPolicy pol;
            pol.digits = digits;
            PrecisionScope scope(pol.working_digits());
            EvalResult x = eval_x(reg, level, pt, pol), y = eval_y(reg, level, pt, pol);
            note_level(out, reg, level);
            Real res = cubic_residual(x, y, reg.curve_coeffs(level)).residual;
            out.result = {{"x", value_json(x, digits)}, {"y", value_json(y, digits)}, {"residual", sci(res)}};
            out.text << "x = " << value_text(x, digits) << "\ny = " << value_text(y, digits) << "\nresidual " << sci(res) << "\n";
        } else if (*mp) {
            out.command = "minpoly";
            out.inputs = {{"level", level}, {"dk", dk}, {"digits", mp_digits}, {"force", force}};
            if (force && !is_prime(level)) std::cerr << "warning: level " << level << " is composite; the result is unproven\n";
            MinPolyResult r = minpoly(reg, {level, dk, {mp_digits, 15, 0}, force});
            note_level(out, reg, level);
            out.result = {{"poly", poly_json(r.poly)},
                          {"degree", r.poly.degree()},
                          {"slack", sci(r.slack)},
                          {"error_bound", sci(r.error_bound)},
                          {"digits", r.digits},
                          {"escalations", r.escalations}};
            out.text << r.poly.to_string('X') << "\n"
                     << "degree " << r.poly.degree() << ", slack " << sci(r.slack) << ", digits " << r.digits << "\n";
        } else if (*hg) {
            out.command = "heegner";
            out.inputs = {{"level", level}, {"dk", dk}, {"digits", hg_digits}, {"force", force}};
            auto pts = heegner_points(reg, {level, dk, {hg_digits, 15, 0}, force});
            note_level(out, reg, level);
            json arr = json::array();
            int shown = std::min(hg_digits, 30);
            for (const auto& p : pts) {
                arr.push_back({{"form", p.root.form.to_string()}, {"x", value_json(p.root.x, hg_digits)}, {"y", value_json(p.y, hg_digits)},
                               {"residual", sci(p.residual)}});
                out.text << p.root.form << "  x = " << complex_text(p.root.x.value, shown) << "\n"
                         << std::string(p.root.form.to_string().size() + 2, ' ') << "y = " << complex_text(p.y.value, shown) << "\n";
            }
            out.text << pts.size() << " distinct points\n";
            out.result["points"] = arr;
        } else if (*vf) {
            out.command = "verify";
            out.inputs = {{"appendix", appendix}};
            if (vlevel) out.inputs["level"] = *vlevel;
            if (vm) out.inputs["m"] = *vm;
            auto keep = [&](int N, long k) { return (!vlevel || *vlevel == N) && (!vm || *vm == k); };
            std::vector<VerifyLine> lines;
            if (appendix == "A" || appendix == "B") {
                std::vector<std::pair<int, long>> cases;
                std::map<std::pair<int, long>, PQFixture> a;
                std::map<std::pair<int, long>, GenPolyFixture> b;
                if (appendix == "A")
                    for (const auto& f : appendix_a())
                        if (keep(f.N, f.m)) a.emplace(std::pair(f.N, f.m), f), cases.emplace_back(f.N, f.m);
                if (appendix == "B")
                    for (const auto& f : appendix_b())
                        if (keep(f.N, f.m)) b.emplace(std::pair(f.N, f.m), f), cases.emplace_back(f.N, f.m);
                lines.resize(cases.size());
                std::mutex mu;
                parallel_for(cases.size(), jobs, [&](std::size_t i) {
                    auto [N, mm] = cases[i];
                    VerifyLine& l = lines[i];
                    l.key = "N=" + std::to_string(N) + " m=" + std::to_string(mm);
                    try {
                        auto e = reg.get(N, order_for_m(mm));
                        {
                            std::lock_guard g(mu);
                            out.provenance[N] = to_string(e.provenance);
                        }
                        PQPair r = pq_extract(*e.record, mm);
                        if (appendix == "A") {
                            const auto& f = a.at({N, mm});
                            l.ok = r.P == f.P && r.Q == f.Q;
                            if (!l.ok) l.detail = "  P\n" + poly_diff(r.P, f.P) + "  Q\n" + poly_diff(r.Q, f.Q);
                        } else {
                            IntPoly g = generating_polynomial(r.P, r.Q, *e.record);
                            const auto& f = b.at({N, mm});
                            l.ok = g == f.R;
                            if (!l.ok) l.detail = poly_diff(g, f.R);
                        }
                    } catch (const std::exception& ex) {
                        l.detail = std::string("    error: ") + ex.what() + "\n";
                    }
                });
            } else if (appendix == "C") {
                PrecisionPolicy pol;
                pol.digits = 30;
                PrecisionScope scope(pol.working_digits());
                for (const auto& f : appendix_c()) {
                    if (!keep(f.N, f.m)) continue;
                    VerifyLine l;
                    l.key = "N=" + std::to_string(f.N) + " m=" + std::to_string(f.m);
                    try {
                        CMPoint pt = sqrt_point(f.m, f.N);
                        EvalResult x = eval_x(reg, f.N, pt, pol), y = eval_y(reg, f.N, pt, pol);
                        note_level(out, reg, f.N);
                        auto close = [&](const EvalResult& v, const std::string& printed) {
                            Real tol = boost::multiprecision::pow(Real(10), -(printed_decimals(printed) - 2));
                            return boost::multiprecision::abs(v.value.re - parse_real(printed)) < tol && boost::multiprecision::abs(v.value.im) < tol;
                        };
                        l.ok = close(x, f.x) && close(y, f.y);
                        if (!l.ok)
                            l.detail = "    x computed " + to_decimal(x.value.re, 20) + ", printed " + f.x + "\n    y computed " +
                                       to_decimal(y.value.re, 20) + ", printed " + f.y + "\n";
                    } catch (const std::exception& ex) {
                        l.detail = std::string("    error: ") + ex.what() + "\n";
                    }
                    lines.push_back(l);
                }
            } else {
                for (const auto& f : appendix_d()) {
                    if (!keep(f.N, f.dK)) continue;
                    VerifyLine l;
                    l.key = "N=" + std::to_string(f.N) + " dK=" + std::to_string(f.dK);
                    try {
                        MinPolyResult r = minpoly(reg, {f.N, f.dK, {0, 15, 0}, false});
                        note_level(out, reg, f.N);
                        l.ok = r.poly == f.M;
                        if (!l.ok) l.detail = poly_diff(r.poly, f.M);
                    } catch (const std::exception& ex) {
                        l.detail = std::string("    error: ") + ex.what() + "\n";
                    }
                    lines.push_back(l);
                }
            }
            if (lines.empty()) throw std::invalid_argument("no appendix " + appendix + " entries match the filter");
            rc = finish_verify(out, lines);
        } else if (*bs) {
            out.command = "bootstrap";
            out.inputs = {{"level", level}, {"order", order}};
            std::vector<int> todo;
            if (level == 0)
                todo.assign(genus_one_levels().begin(), genus_one_levels().end());
            else if (!is_genus_one_level(level))
                throw UnknownLevel(level);
            else
                todo.push_back(level);
            std::filesystem::create_directories(reg.dir());
            json arr = json::array();
            for (int N : todo) {
                CurveRecord rec = bootstrap_record(N, cubic_from_fixtures(N), order);
                CubicCheck chk = validate_cubic(rec);
                if (!chk.ok) throw std::runtime_error("level " + std::to_string(N) + " fails the cubic check at q^" + (chk.first_bad ? std::to_string(*chk.first_bad) : "?"));
                auto path = record_path(N, reg.dir());
                save_record(path.string(), rec);
                arr.push_back({{"N", N}, {"path", path.string()}});
                out.text << "wrote " << path.string() << "\n";
            }
            out.result["written"] = arr;
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }

    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (out.as_json) {
        json env = {{"command", out.command}, {"inputs", out.inputs}, {"result", out.result}, {"timing_ms", ms}};
        json prov = json::object();
        for (const auto& [N, p] : out.provenance) prov[std::to_string(N)] = p;
        env["provenance"] = prov;
        std::cout << env.dump(2) << "\n";
    } else {
        std::cout << out.text.str();
    }
    return rc;
}
