#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "ddtruss/errors.hpp"

namespace ddtruss {

/// One observed uniaxial (strain, stress) pair. Strain is dimensionless,
/// stress in Pa.
struct MaterialPoint {
    double strain = 0.0;
    double stress = 0.0;
};

/// Canonical uniaxial dataset: at least two points, strains strictly
/// increasing. The constructor canonicalizes its input (sorts by strain,
/// merges duplicate strains by averaging their stresses) and rejects
/// non-finite values; there is no unchecked construction path.
///
/// Immutable after construction; safe to share across concurrent solves.
class MaterialDataset {
public:
    explicit MaterialDataset(std::vector<MaterialPoint> points);

    int size() const { return static_cast<int>(strains_.size()); }
    const Eigen::VectorXd& strains() const { return strains_; }
    const Eigen::VectorXd& stresses() const { return stresses_; }
    MaterialPoint point(int j) const { return {strains_(j), stresses_(j)}; }

    double strain_min() const { return strains_(0); }
    double strain_max() const { return strains_(size() - 1); }
    double strain_range() const { return strain_max() - strain_min(); }

    friend bool operator==(const MaterialDataset& a, const MaterialDataset& b) {
        return a.strains_ == b.strains_ && a.stresses_ == b.stresses_;
    }

private:
    Eigen::VectorXd strains_;
    Eigen::VectorXd stresses_;
};

/// Reads a dataset from CSV: mandatory header `strain,stress`, one pair per
/// row, `.` decimal separator, LF or CRLF line endings. Lines starting with
/// `#` are skipped. Throws DatasetError with the offending line number on
/// malformed input.
MaterialDataset load_dataset(const std::filesystem::path& path);

/// Writes the canonical CSV form: `strain,stress` header then one row per
/// point, LF line endings, 17 significant digits (round-trips doubles
/// exactly, so load(save(d)) == d).
void save_dataset(const MaterialDataset& dataset, const std::filesystem::path& path);

/// Stream form of save_dataset; used by the CLI to prepend comment headers.
void write_dataset(std::ostream& out, const MaterialDataset& dataset);

/// Analytic uniaxial stress-strain laws for generating synthetic datasets.
struct MaterialLaw {
    enum class Id { linear, ramberg_osgood, hyperbolic };

    Id id = Id::linear;
    double youngs_modulus = 200e9;  ///< E, Pa

    // hyperbolic: sigma = E*eps / (1 + |eps|/eps_ref)
    double eps_ref = 0.01;

    // ramberg_osgood: strain(sigma) = sigma/E * (1 + offset*(sigma/yield)^(exponent-1)),
    // inverted for stress(strain); odd-extended to negative strains.
    double yield_stress = 250e6;
    double ro_offset = 3.0 / 7.0;
    double ro_exponent = 5.0;

    double stress(double strain) const;
    void validate() const;  ///< throws std::invalid_argument on bad parameters

    static Id parse_id(std::string_view name);  ///< throws naming the valid ids
    static const char* id_name(Id id);
};

/// Generates n points at uniformly spaced strains on [strain_lo, strain_hi]
/// with stress = law(strain) + N(0, noise_std) noise. The noise stream is a
/// fixed Box-Muller transform of mt19937_64, so identical arguments produce
/// bitwise-identical datasets on every platform.
MaterialDataset synth_dataset(const MaterialLaw& law, int n, double strain_lo,
                              double strain_hi, double noise_std, std::uint64_t seed);

}  // namespace ddtruss
