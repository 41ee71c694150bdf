#pragma once

#include "si/bootstrap.hpp"
#include "si/curve.hpp"
#include "si/fixtures.hpp"

#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#ifndef SI_DEFAULT_DATA_DIR
#define SI_DEFAULT_DATA_DIR "data"
#endif

namespace si {

inline constexpr long kDefaultOrder = 600;

inline std::filesystem::path data_dir()
{
    if (const char* env = std::getenv("SI_DATA_DIR"); env && *env) return env;
    return SI_DEFAULT_DATA_DIR;
}

inline std::filesystem::path record_path(int N, const std::filesystem::path& dir = data_dir())
{
    return dir / ("N" + std::to_string(N) + ".rec");
}

enum class Provenance { vendored, bootstrapped };

inline const char* to_string(Provenance p) { return p == Provenance::vendored ? "vendored" : "bootstrapped"; }

class UnknownLevel : public std::invalid_argument {
public:
    explicit UnknownLevel(int N) : std::invalid_argument("level " + std::to_string(N) + " is not one of the 38 genus-one levels") {}
};

// (A..E) from every appendix A/B pair available for the level.
inline Cubic cubic_from_fixtures(int N)
{
    std::map<int, PQRTriple> by_m;
    for (const auto& a : appendix_a())
        if (a.N == N) by_m[a.m].P = a.P, by_m[a.m].Q = a.Q;
    std::vector<PQRTriple> triples;
    for (const auto& b : appendix_b()) {
        if (b.N != N) continue;
        auto it = by_m.find(b.m);
        if (it == by_m.end()) continue;
        it->second.R = b.R;
        triples.push_back(it->second);
    }
    if (triples.empty()) throw BootstrapError("no appendix data for level " + std::to_string(N));
    return bootstrap_coeffs(triples);
}

struct RegistryEntry {
    std::shared_ptr<const CurveRecord> record;
    Provenance provenance;
};

// Curve records by level.  Records come from SI_DATA_DIR when present and long enough,
// otherwise they are regenerated from the appendix data; longer records replace shorter ones.
class LevelRegistry {
public:
    explicit LevelRegistry(std::filesystem::path dir = data_dir()) : dir_(std::move(dir)) {}

    RegistryEntry get(int N, long min_order = kDefaultOrder)
    {
        if (!is_genus_one_level(N)) throw UnknownLevel(N);
        std::lock_guard lock(level_mutex(N));
        {
            std::lock_guard g(mu_);
            if (auto it = entries_.find(N); it != entries_.end() && it->second.record->order >= min_order) return it->second;
        }
        RegistryEntry e = build(N, min_order);
        std::lock_guard g(mu_);
        entries_[N] = e;
        return e;
    }

    std::shared_ptr<const CurveRecord> record(int N, long min_order = kDefaultOrder) { return get(N, min_order).record; }

    Cubic curve_coeffs(int N)
    {
        if (!is_genus_one_level(N)) throw UnknownLevel(N);
        {
            std::lock_guard g(mu_);
            if (auto it = entries_.find(N); it != entries_.end()) return it->second.record->cubic;
        }
        auto path = record_path(N, dir_);
        if (std::filesystem::exists(path)) return load_record(path.string()).cubic;
        return cubic_from_fixtures(N);
    }

    const std::filesystem::path& dir() const { return dir_; }

private:
    RegistryEntry build(int N, long min_order)
    {
        auto path = record_path(N, dir_);
        std::optional<Cubic> cubic;
        if (std::filesystem::exists(path)) {
            CurveRecord rec = load_record(path.string());
            if (rec.N != N) throw RecordError("record " + path.string() + " is for level " + std::to_string(rec.N));
            if (rec.order >= min_order) return {std::make_shared<const CurveRecord>(std::move(rec)), Provenance::vendored};
            cubic = rec.cubic;
        }
        if (!cubic) cubic = cubic_from_fixtures(N);
        return {std::make_shared<const CurveRecord>(bootstrap_record(N, *cubic, std::max(min_order, kDefaultOrder))), Provenance::bootstrapped};
    }

    std::mutex& level_mutex(int N)
    {
        std::lock_guard g(mu_);
        return level_mu_[N];
    }

    std::filesystem::path dir_;
    std::mutex mu_;
    std::map<int, std::mutex> level_mu_;
    std::map<int, RegistryEntry> entries_;
};

inline LevelRegistry& default_registry()
{
    static LevelRegistry reg;
    return reg;
}

}  // namespace si
