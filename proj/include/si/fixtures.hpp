#pragma once

#include "si/int_poly.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef SI_DEFAULT_FIXTURE_DIR
#define SI_DEFAULT_FIXTURE_DIR "fixtures"
#endif

namespace si {

inline std::filesystem::path fixture_dir()
{
    if (const char* env = std::getenv("SI_FIXTURE_DIR"); env && *env) return env;
    return SI_DEFAULT_FIXTURE_DIR;
}

using FixtureFields = std::map<std::string, std::string>;

inline FixtureFields read_fixture(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read fixture " + path.string());
    FixtureFields out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("malformed fixture line in " + path.string() + ": " + line);
        out[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return out;
}

struct PQFixture {
    int N, m;
    IntPoly P, Q;
};
struct GenPolyFixture {
    int N, m;
    IntPoly R;
};
struct ValueFixture {
    int N, m;
    std::string x, y;  // decimal text as printed
};
struct MinPolyFixture {
    int N, dK;
    std::string tau0;
    IntPoly M;
};

namespace detail {

inline std::vector<FixtureFields> read_all(const std::string& appendix)
{
    std::vector<FixtureFields> out;
    auto dir = fixture_dir() / ("appendix" + appendix);
    if (!std::filesystem::is_directory(dir)) throw std::runtime_error("fixture directory missing: " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".txt") out.push_back(read_fixture(entry.path()));
    return out;
}

inline const std::string& field(const FixtureFields& f, const std::string& key)
{
    auto it = f.find(key);
    if (it == f.end()) throw std::runtime_error("fixture lacks field " + key);
    return it->second;
}

}  // namespace detail

inline std::vector<PQFixture> appendix_a()
{
    std::vector<PQFixture> out;
    for (const auto& f : detail::read_all("A"))
        out.push_back({std::stoi(detail::field(f, "N")), std::stoi(detail::field(f, "m")), parse_int_poly(detail::field(f, "P")),
                       parse_int_poly(detail::field(f, "Q"))});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return std::pair(a.N, a.m) < std::pair(b.N, b.m); });
    return out;
}

inline std::vector<GenPolyFixture> appendix_b()
{
    std::vector<GenPolyFixture> out;
    for (const auto& f : detail::read_all("B"))
        out.push_back({std::stoi(detail::field(f, "N")), std::stoi(detail::field(f, "m")), parse_int_poly(detail::field(f, "R"))});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return std::pair(a.N, a.m) < std::pair(b.N, b.m); });
    return out;
}

inline std::vector<ValueFixture> appendix_c()
{
    std::vector<ValueFixture> out;
    for (const auto& f : detail::read_all("C"))
        out.push_back({std::stoi(detail::field(f, "N")), std::stoi(detail::field(f, "m")), detail::field(f, "x"), detail::field(f, "y")});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return std::pair(a.N, a.m) < std::pair(b.N, b.m); });
    return out;
}

inline std::vector<MinPolyFixture> appendix_d()
{
    std::vector<MinPolyFixture> out;
    for (const auto& f : detail::read_all("D"))
        out.push_back({std::stoi(detail::field(f, "N")), std::stoi(detail::field(f, "dK")), detail::field(f, "tau0"),
                       parse_int_poly(detail::field(f, "M"))});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return std::pair(a.N, -a.dK) < std::pair(b.N, -b.dK); });
    return out;
}

// Number of decimal places printed in a fixture value such as "30.84491025792583".
inline int printed_decimals(const std::string& v)
{
    auto dot = v.find('.');
    return dot == std::string::npos ? 0 : static_cast<int>(v.size() - dot - 1);
}

}  // namespace si
