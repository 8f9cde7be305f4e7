#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tagforge {

enum class Errc {
  invalid_address,
  address_out_of_range,
  constraint_violation,
  not_a_substitution_site,
  label_mismatch,
  auxiliary_tree_rejected,
  unknown_tree,
  no_anchor,
  already_anchored,
  missing_adposition,
  missing_anchor,
  syntax_error,
  duplicate_tree_name,
  unbounded_grammar,
  empty_string_derivable,
  unit_cycle_detected,
  io_error,
  invalid_argument,
};

inline std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_address: return "invalid-address";
    case Errc::address_out_of_range: return "address-out-of-range";
    case Errc::constraint_violation: return "constraint-violation";
    case Errc::not_a_substitution_site: return "not-a-substitution-site";
    case Errc::label_mismatch: return "label-mismatch";
    case Errc::auxiliary_tree_rejected: return "auxiliary-tree-rejected";
    case Errc::unknown_tree: return "unknown-tree";
    case Errc::no_anchor: return "no-anchor";
    case Errc::already_anchored: return "already-anchored";
    case Errc::missing_adposition: return "missing-adposition";
    case Errc::missing_anchor: return "missing-anchor";
    case Errc::syntax_error: return "syntax-error";
    case Errc::duplicate_tree_name: return "duplicate-tree-name";
    case Errc::unbounded_grammar: return "unbounded-grammar";
    case Errc::empty_string_derivable: return "empty-string-derivable";
    case Errc::unit_cycle_detected: return "unit-cycle-detected";
    case Errc::io_error: return "io-error";
    case Errc::invalid_argument: return "invalid-argument";
  }
  return "unknown-error";
}

// All library failures surface as this exception; code() is the stable
// machine-readable part, what() carries the detail.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace tagforge
