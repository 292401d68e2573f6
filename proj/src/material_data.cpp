#include "ddtruss/material_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

namespace ddtruss {

namespace {

bool finite(double v) { return std::isfinite(v); }

std::string trim(std::string s) {
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
}

double parse_double(const std::string& field, int line_no) {
    const std::string t = trim(field);
    double value = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || t.empty())
        throw DatasetError("line " + std::to_string(line_no) + ": malformed number '" + t + "'");
    if (!finite(value))
        throw DatasetError("line " + std::to_string(line_no) + ": non-finite value '" + t + "'");
    return value;
}

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Bitwise-reproducible standard normal deviates: Box-Muller over the raw
/// mt19937_64 stream (std::normal_distribution is implementation-defined).
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double next() {
        const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;          // [0, 1)
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 rng_;
};

double ramberg_osgood_stress(double strain, const MaterialLaw& law) {
    if (strain == 0.0) return 0.0;
    const double mag = std::abs(strain);
    const double sign = strain < 0.0 ? -1.0 : 1.0;
    // strain(s) = s/E (1 + offset (s/yield)^(n-1)) is increasing in s and
    // reaches mag before s = E mag, so bisect on [0, E mag].
    double lo = 0.0, hi = law.youngs_modulus * mag;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double eps = mid / law.youngs_modulus *
                           (1.0 + law.ro_offset * std::pow(mid / law.yield_stress,
                                                           law.ro_exponent - 1.0));
        (eps < mag ? lo : hi) = mid;
    }
    return sign * 0.5 * (lo + hi);
}

}  // namespace

MaterialDataset::MaterialDataset(std::vector<MaterialPoint> points) {
    for (const MaterialPoint& p : points)
        if (!finite(p.strain) || !finite(p.stress))
            throw DatasetError("dataset contains a non-finite strain or stress");

    std::sort(points.begin(), points.end(),
              [](const MaterialPoint& a, const MaterialPoint& b) { return a.strain < b.strain; });

    // merge exact duplicate strains by averaging their stresses
    std::vector<MaterialPoint> merged;
    merged.reserve(points.size());
    for (std::size_t i = 0; i < points.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < points.size() && points[j].strain == points[i].strain) sum += points[j++].stress;
        merged.push_back({points[i].strain, sum / static_cast<double>(j - i)});
        i = j;
    }

    if (merged.size() < 2)
        throw DatasetError("dataset needs at least 2 distinct strain points, got " +
                           std::to_string(merged.size()));

    strains_.resize(static_cast<Eigen::Index>(merged.size()));
    stresses_.resize(static_cast<Eigen::Index>(merged.size()));
    for (std::size_t i = 0; i < merged.size(); ++i) {
        strains_(static_cast<Eigen::Index>(i)) = merged[i].strain;
        stresses_(static_cast<Eigen::Index>(i)) = merged[i].stress;
    }
}

MaterialDataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open dataset file '" + path.string() + "'");

    std::vector<MaterialPoint> points;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string content = trim(line);
        if (content.empty() || content.front() == '#') continue;
        if (!header_seen) {
            if (content != "strain,stress")
                throw DatasetError("line " + std::to_string(line_no) +
                                   ": expected header 'strain,stress', got '" + content + "'");
            header_seen = true;
            continue;
        }
        const auto comma = content.find(',');
        if (comma == std::string::npos || content.find(',', comma + 1) != std::string::npos)
            throw DatasetError("line " + std::to_string(line_no) +
                               ": expected exactly two comma-separated fields");
        MaterialPoint p;
        p.strain = parse_double(content.substr(0, comma), line_no);
        p.stress = parse_double(content.substr(comma + 1), line_no);
        points.push_back(p);
    }
    if (!header_seen)
        throw DatasetError("dataset file '" + path.string() + "' has no 'strain,stress' header");
    return MaterialDataset(std::move(points));
}

void write_dataset(std::ostream& out, const MaterialDataset& dataset) {
    out << "strain,stress\n";
    for (int j = 0; j < dataset.size(); ++j) {
        const MaterialPoint p = dataset.point(j);
        out << format17(p.strain) << ',' << format17(p.stress) << '\n';
    }
}

void save_dataset(const MaterialDataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary: keep LF on every platform
    if (!out) throw DatasetError("cannot write dataset file '" + path.string() + "'");
    write_dataset(out, dataset);
    out.flush();
    if (!out) throw DatasetError("failed while writing dataset file '" + path.string() + "'");
}

double MaterialLaw::stress(double strain) const {
    switch (id) {
        case Id::linear:
            return youngs_modulus * strain;
        case Id::hyperbolic:
            return youngs_modulus * strain / (1.0 + std::abs(strain) / eps_ref);
        case Id::ramberg_osgood:
            return ramberg_osgood_stress(strain, *this);
    }
    throw std::invalid_argument("unknown material law id");
}

void MaterialLaw::validate() const {
    if (!(youngs_modulus > 0.0) || !finite(youngs_modulus))
        throw std::invalid_argument("material law: E must be positive");
    if (id == Id::hyperbolic && (!(eps_ref > 0.0) || !finite(eps_ref)))
        throw std::invalid_argument("material law: eps_ref must be positive");
    if (id == Id::ramberg_osgood) {
        if (!(yield_stress > 0.0) || !finite(yield_stress))
            throw std::invalid_argument("material law: yield stress must be positive");
        if (!(ro_offset >= 0.0) || !finite(ro_offset))
            throw std::invalid_argument("material law: offset must be non-negative");
        if (!(ro_exponent >= 1.0) || !finite(ro_exponent))
            throw std::invalid_argument("material law: exponent must be >= 1");
    }
}

MaterialLaw::Id MaterialLaw::parse_id(std::string_view name) {
    if (name == "linear") return Id::linear;
    if (name == "ramberg_osgood") return Id::ramberg_osgood;
    if (name == "hyperbolic") return Id::hyperbolic;
    throw std::invalid_argument("unknown material law '" + std::string(name) +
                                "' (valid: linear, ramberg_osgood, hyperbolic)");
}

const char* MaterialLaw::id_name(Id id) {
    switch (id) {
        case Id::linear: return "linear";
        case Id::ramberg_osgood: return "ramberg_osgood";
        case Id::hyperbolic: return "hyperbolic";
    }
    return "?";
}

MaterialDataset synth_dataset(const MaterialLaw& law, int n, double strain_lo, double strain_hi,
                              double noise_std, std::uint64_t seed) {
    law.validate();
    if (n < 2) throw std::invalid_argument("synth_dataset: need n >= 2 points");
    if (!(strain_lo < strain_hi) || !finite(strain_lo) || !finite(strain_hi))
        throw std::invalid_argument("synth_dataset: need finite strain_lo < strain_hi");
    if (!(noise_std >= 0.0) || !finite(noise_std))
        throw std::invalid_argument("synth_dataset: noise_std must be >= 0");

    GaussianSampler gauss(seed);
    std::vector<MaterialPoint> points;
    points.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double eps = strain_lo + static_cast<double>(i) * (strain_hi - strain_lo) /
                                           static_cast<double>(n - 1);
        double sigma = law.stress(eps);
        if (noise_std > 0.0) sigma += noise_std * gauss.next();
        points.push_back({eps, sigma});
    }
    return MaterialDataset(std::move(points));
}

}  // namespace ddtruss
