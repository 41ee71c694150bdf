#pragma once

#include "si/int_poly.hpp"
#include "si/qseries.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace si {

// Coefficients of y^2 = x^3 + A xy + B x^2 + C y + D x + E.
struct Cubic {
    Int A, B, C, D, E;
    friend bool operator==(const Cubic&, const Cubic&) = default;
};

struct CurveRecord {
    int N = 0;
    Cubic cubic;
    std::vector<Int> x;  // exponents -2 .. order
    std::vector<Int> y;  // exponents -3 .. order
    long order = 0;

    IntSeries x_series() const { return IntSeries(1, -2, order + 1, x); }
    IntSeries y_series() const { return IntSeries(1, -3, order + 1, y); }
    const Int& x_coeff(long n) const { return x.at(static_cast<std::size_t>(n + 2)); }
    const Int& y_coeff(long n) const { return y.at(static_cast<std::size_t>(n + 3)); }

    friend bool operator==(const CurveRecord&, const CurveRecord&) = default;
};

inline const std::array<int, 38>& genus_one_levels()
{
    static const std::array<int, 38> levels = {37,  43,  53,  57,  58,  61,  65,  74,  77,  79,  82,  83,  86,
                                               89,  91,  101, 102, 111, 114, 118, 123, 130, 131, 138, 141, 142,
                                               143, 145, 155, 159, 174, 182, 190, 195, 210, 222, 231, 238};
    return levels;
}

inline bool is_genus_one_level(int N)
{
    const auto& lv = genus_one_levels();
    return std::binary_search(lv.begin(), lv.end(), N);
}

inline bool is_prime(long n)
{
    if (n < 2) return false;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

struct CubicCheck {
    bool ok = true;
    std::optional<long> first_bad;  // exponent of the first nonvanishing coefficient
    bool insufficient = false;      // window too short to say anything
};

// Checks y^2 - x^3 - A xy - B x^2 - C y - D x - E = 0 through q^order.
inline CubicCheck validate_cubic(const CurveRecord& c)
{
    CubicCheck out;
    if (c.order < 1) out.insufficient = true;
    if (c.x.size() != static_cast<std::size_t>(c.order + 3) || c.y.size() != static_cast<std::size_t>(c.order + 4)) {
        out.ok = false;
        out.first_bad = -6;
        return out;
    }
    IntSeries x = c.x_series(), y = c.y_series();
    const Cubic& k = c.cubic;
    IntSeries x2 = x * x;
    IntSeries rel = y * y - x2 * x - x * y * k.A - x2 * k.B - y * k.C - x * k.D - IntSeries::constant(k.E);
    for (std::int64_t n = rel.lo(); n <= c.order && n < rel.trunc(); ++n) {
        if (rel.coeff(n) != 0) {
            out.ok = false;
            out.first_bad = n;
            return out;
        }
    }
    return out;
}

class RecordError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string sha256_hex(const std::string& bytes)
{
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) throw std::runtime_error("SHA256 failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

inline std::string format_record(const CurveRecord& c)
{
    std::ostringstream os;
    os << "GAMMA0PLUS v1 N=" << c.N << " A=" << c.cubic.A << " B=" << c.cubic.B << " C=" << c.cubic.C << " D=" << c.cubic.D
       << " E=" << c.cubic.E << " ORDER=" << c.order << "\n";
    os << "X\n";
    for (const auto& v : c.x) os << v << "\n";
    os << "Y\n";
    for (const auto& v : c.y) os << v << "\n";
    std::string body = os.str();
    return body + "SHA256=" + sha256_hex(body) + "\n";
}

inline CurveRecord parse_record(const std::string& text)
{
    auto sha_pos = text.rfind("SHA256=");
    if (sha_pos == std::string::npos || (sha_pos != 0 && text[sha_pos - 1] != '\n')) throw RecordError("record has no checksum line");
    std::string body = text.substr(0, sha_pos);
    std::string digest = text.substr(sha_pos + 7);
    while (!digest.empty() && (digest.back() == '\n' || digest.back() == '\r' || digest.back() == ' ')) digest.pop_back();
    if (digest != sha256_hex(body)) throw RecordError("record checksum mismatch");

    std::istringstream in(body);
    std::string line;
    if (!std::getline(in, line)) throw RecordError("empty record");
    std::istringstream hdr(line);
    std::string magic, version;
    hdr >> magic >> version;
    if (magic != "GAMMA0PLUS" || version != "v1") throw RecordError("bad record header");
    CurveRecord c;
    bool seen[8] = {};
    std::string kv;
    while (hdr >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw RecordError("bad header field '" + kv + "'");
        std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        try {
            if (key == "N") c.N = std::stoi(val), seen[0] = true;
            else if (key == "A") c.cubic.A = Int(val), seen[1] = true;
            else if (key == "B") c.cubic.B = Int(val), seen[2] = true;
            else if (key == "C") c.cubic.C = Int(val), seen[3] = true;
            else if (key == "D") c.cubic.D = Int(val), seen[4] = true;
            else if (key == "E") c.cubic.E = Int(val), seen[5] = true;
            else if (key == "ORDER") c.order = std::stol(val), seen[6] = true;
            else throw RecordError("unknown header field '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw RecordError("bad value in header field '" + kv + "'");
        }
    }
    for (int i = 0; i < 7; ++i)
        if (!seen[i]) throw RecordError("record header incomplete");
    if (c.order < 0) throw RecordError("negative record order");

    auto read_block = [&](const char* tag, std::size_t count, std::vector<Int>& out) {
        if (!std::getline(in, line) || line != tag) throw RecordError(std::string("expected '") + tag + "' section");
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            if (!std::getline(in, line)) throw RecordError(std::string("truncated '") + tag + "' section");
            try {
                out.emplace_back(line);
            } catch (const std::invalid_argument&) {
                throw RecordError("non-integer line '" + line + "'");
            }
        }
    };
    read_block("X", static_cast<std::size_t>(c.order + 3), c.x);
    read_block("Y", static_cast<std::size_t>(c.order + 4), c.y);
    if (std::getline(in, line) && !line.empty()) throw RecordError("trailing data in record");

    if (c.x[0] != 1) throw RecordError("x lead coefficient is not 1");
    if (c.x[2] != 0) throw RecordError("x has nonzero constant term");
    if (c.y[0] != 1) throw RecordError("y lead coefficient is not 1");
    if (c.y[3] != 0) throw RecordError("y has nonzero constant term");
    return c;
}

inline void save_record(const std::string& path, const CurveRecord& c)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RecordError("cannot write " + path);
    out << format_record(c);
    if (!out) throw RecordError("write failed for " + path);
}

inline CurveRecord load_record(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RecordError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_record(ss.str());
}

}  // namespace si
