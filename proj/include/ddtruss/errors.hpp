#pragma once

#include <stdexcept>
#include <string>

namespace ddtruss {

/// Material dataset problems: unreadable files, malformed rows, invariant
/// violations (fewer than two points, non-finite values).
class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Truss description problems: bad node references, zero-length members,
/// mechanisms (rank-deficient models), malformed config files.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A strain query outside the range a surrogate can answer for. This is the
/// data-driven failure mode "the dataset does not cover the requested strain",
/// not an internal fault.
class DomainError : public std::runtime_error {
public:
    DomainError(const std::string& what, double strain)
        : std::runtime_error(what), strain_(strain) {}

    double strain() const noexcept { return strain_; }

private:
    double strain_;
};

/// DomainError raised while assembling member forces; carries the member id.
class CoverageError : public DomainError {
public:
    CoverageError(const std::string& what, int member_id, double strain)
        : DomainError(what, strain), member_id_(member_id) {}

    int member_id() const noexcept { return member_id_; }

private:
    int member_id_;
};

/// Newton breakdown: singular tangent or non-finite residual.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, int iteration)
        : std::runtime_error(what), iteration_(iteration) {}

    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

}  // namespace ddtruss
