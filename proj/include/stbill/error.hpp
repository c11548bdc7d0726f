#ifndef STBILL_ERROR_HPP
#define STBILL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace stbill {

enum class ErrorKind {
    invalid_input,
    degenerate,
    overflow,
    parallel_lines,
    non_transverse_edges,
    degenerate_step,
    empty_interval,
    not_convex,
    not_equilateral,
    signature_mismatch,
    parallel_witness_lines,
    non_positive_area,
    io,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::invalid_input: return "InvalidInput";
        case ErrorKind::degenerate: return "Degenerate";
        case ErrorKind::overflow: return "Overflow";
        case ErrorKind::parallel_lines: return "ParallelLines";
        case ErrorKind::non_transverse_edges: return "NonTransverseEdges";
        case ErrorKind::degenerate_step: return "DegenerateStep";
        case ErrorKind::empty_interval: return "EmptyInterval";
        case ErrorKind::not_convex: return "NotConvex";
        case ErrorKind::not_equilateral: return "NotEquilateral";
        case ErrorKind::signature_mismatch: return "SignatureMismatch";
        case ErrorKind::parallel_witness_lines: return "ParallelWitnessLines";
        case ErrorKind::non_positive_area: return "NonPositiveArea";
        case ErrorKind::io: return "IO";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace stbill

#endif
