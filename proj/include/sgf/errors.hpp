#pragma once

#include <stdexcept>
#include <string>

namespace sgf {

// All recoverable failures are thrown as Error with a stable machine-readable
// code plus a human-readable message.  Codes are listed next to the operations
// that raise them; the CLI maps Error to exit code 2 (usage/validation) or
// propagates verification failures as exit code 1.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

namespace errc {
inline constexpr const char* loop_rejected = "LoopRejected";
inline constexpr const char* bad_edge_ids = "BadEdgeIds";
inline constexpr const char* bad_vertex = "BadVertex";
inline constexpr const char* mixed_parents = "MixedParents";
inline constexpr const char* not_a_circuit = "NotACircuit";
inline constexpr const char* not_even = "NotEven";
inline constexpr const char* not_eulerian = "NotEulerian";
inline constexpr const char* not_supereulerian = "NotSupereulerian";
inline constexpr const char* not_flow_admissible = "NotFlowAdmissible";
inline constexpr const char* not_balanced = "NotBalanced";
inline constexpr const char* not_hamiltonian = "NotHamiltonian";
inline constexpr const char* not_cubic = "NotCubic";
inline constexpr const char* even_negative_count = "EvenNegativeCount";
inline constexpr const char* odd_negative_support = "OddNegativeSupport";
inline constexpr const char* negative_edge_present = "NegativeEdgePresent";
inline constexpr const char* negative_edge_in_contraction = "NegativeEdgeInContraction";
inline constexpr const char* mode_mismatch = "ModeMismatch";
inline constexpr const char* missing_value = "MissingValue";
inline constexpr const char* search_exhausted = "SearchExhausted";
inline constexpr const char* budget_exceeded = "BudgetExceeded";
inline constexpr const char* template_precondition = "TemplatePreconditionViolated";
inline constexpr const char* identity_in_s = "IdentityInS";
inline constexpr const char* not_inverse_closed = "NotInverseClosed";
inline constexpr const char* even_order = "EvenOrder";
inline constexpr const char* disconnected = "Disconnected";
inline constexpr const char* bad_witness = "BadWitness";
inline constexpr const char* format_error = "FormatError";
inline constexpr const char* bad_k = "BadK";
inline constexpr const char* invalid_pair = "InvalidPair";
inline constexpr const char* not_even_eulerian = "NotEvenEulerian";
inline constexpr const char* odd_negative_count = "OddNegativeCount";
inline constexpr const char* not_balanced_hamiltonian = "NotBalancedHamiltonian";
inline constexpr const char* precondition_violated = "PreconditionViolated";
inline constexpr const char* not_intersecting = "NotIntersecting";
inline constexpr const char* not_kotzig = "NotKotzig";
inline constexpr const char* not_decomposition = "NotDecomposition";
inline constexpr const char* base_pair_not_positive = "BasePairNotPositive";
inline constexpr const char* no_strategy = "NoStrategySucceeded";
inline constexpr const char* fingerprint_mismatch = "FingerprintMismatch";
inline constexpr const char* parse_error = "ParseError";
inline constexpr const char* internal = "InternalError";
} // namespace errc

} // namespace sgf
