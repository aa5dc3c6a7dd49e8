#pragma once

#include <stdexcept>
#include <string>

namespace hlw {

/// Error categories shared across the library. Capacity guards (too_large)
/// are distinct from contract violations so callers can fail fast with a
/// cost estimate instead of attempting an oversized run.
enum class errc {
    not_prime,
    even_characteristic,
    reducible_modulus,
    division_by_zero,
    context_mismatch,
    bad_axis,
    zero_scalar,
    arity_mismatch,
    wrong_dimension,
    dimension_mismatch,
    bad_exponent,
    bad_range,
    bad_field,
    empty_set,
    too_large,
    unclassifiable,
    usage,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::not_prime: return "NotPrime";
        case errc::even_characteristic: return "EvenCharacteristic";
        case errc::reducible_modulus: return "ReducibleModulus";
        case errc::division_by_zero: return "DivisionByZero";
        case errc::context_mismatch: return "ContextMismatch";
        case errc::bad_axis: return "BadAxis";
        case errc::zero_scalar: return "ZeroScalar";
        case errc::arity_mismatch: return "ArityMismatch";
        case errc::wrong_dimension: return "WrongDimension";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::bad_exponent: return "BadExponent";
        case errc::bad_range: return "BadRange";
        case errc::bad_field: return "BadField";
        case errc::empty_set: return "EmptySet";
        case errc::too_large: return "TooLarge";
        case errc::unclassifiable: return "Unclassifiable";
        case errc::usage: return "Usage";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond) raise(code, what);
}

}  // namespace hlw
