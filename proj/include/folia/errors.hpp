#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace folia {

// Base class for everything thrown by the library.
class error : public std::runtime_error {
public:
    explicit error(std::string msg) : std::runtime_error(std::move(msg)) {}
};

// Input text could not be parsed. Carries 1-based line/column.
class parse_error : public error {
public:
    parse_error(std::string msg, int line, int column)
        : error(std::move(msg)), line(line), column(column) {}
    int line;
    int column;
};

// The parsed form/curve does not vanish at the origin.
class nonzero_constant_term_error : public parse_error {
public:
    nonzero_constant_term_error(std::string msg, int line, int column)
        : parse_error(std::move(msg), line, column) {}
};

// Domain errors carry the chart path of the offending location when there is
// one (e.g. "root/x[t=0]/y").
class domain_error : public error {
public:
    explicit domain_error(std::string msg, std::string chart_path = {})
        : error(std::move(msg)), chart_path(std::move(chart_path)) {}
    std::string chart_path;
};

// A field-tower operation would exceed two quadratic extensions.
class tower_depth_error : public domain_error {
public:
    using domain_error::domain_error;
};

// A root/coefficient needs an extension of degree > 2 over the current tower.
class unsupported_extension_error : public domain_error {
public:
    using domain_error::domain_error;
};

// Reduction/resolution did not terminate within the depth guard.
class resolution_depth_error : public domain_error {
public:
    using domain_error::domain_error;
};

// cs_index was asked for a curve that is not invariant.
class curve_not_invariant_error : public domain_error {
public:
    using domain_error::domain_error;
};

// cs_index denominator vanishes identically along the curve.
class non_isolated_residue_error : public domain_error {
public:
    using domain_error::domain_error;
};

// Separatrix search exhausted all candidates (must not happen on reduced
// trees of genuine foliations).
class no_separatrix_error : public domain_error {
public:
    using domain_error::domain_error;
};

// No ramification exponent <= d_max produced a free-center, simple-only tree.
class no_ramification_error : public domain_error {
public:
    no_ramification_error(std::string msg, int d_max, std::string best_summary)
        : domain_error(std::move(msg)), d_max(d_max),
          best_summary(std::move(best_summary)) {}
    int d_max;
    std::string best_summary;
};

// A violated internal invariant; indicates a bug, not bad input.
class internal_error : public error {
public:
    using error::error;
};

} // namespace folia
