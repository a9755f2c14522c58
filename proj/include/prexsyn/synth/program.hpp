#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "prexsyn/synth/universe.hpp"

namespace prexsyn::synth {

enum class TokenType : std::uint8_t { BB = 0, RXN = 1, End = 2, Start = 3 };

struct Token {
  TokenType type = TokenType::End;
  int id = 0;  // BB or RXN id; unused otherwise

  static Token bb(int id) { return {TokenType::BB, id}; }
  static Token rxn(int id) { return {TokenType::RXN, id}; }

  friend bool operator==(const Token&, const Token&) = default;
};

// Postfix program: BB tokens push, RXN tokens pop `arity` operands and push
// the product. START/END are model-side sentinels, never stored here.
struct PostfixProgram {
  std::vector<Token> tokens;

  friend bool operator==(const PostfixProgram&, const PostfixProgram&) = default;
};

// Grammar validity by stack simulation alone: ids in range, no underflow,
// final depth exactly 1.
bool is_grammar_valid(const PostfixProgram& p, const Library& lib,
                      const Registry& reg);

// Space-separated `B<id>` / `R<id>` serialization.
std::string program_to_string(const PostfixProgram& p);
PostfixProgram program_from_string(std::string_view text);

enum class EvalErrorKind : std::uint8_t {
  None,
  MalformedProgram,  // stack underflow, bad id, or final depth != 1
  ReactionFailed,    // apply_template NoMatch / ValenceViolation
};

struct EvalResult {
  std::optional<chem::MolGraph> product;
  EvalErrorKind error = EvalErrorKind::None;
  int position = -1;  // offending token index
  chem::ApplyError apply_error = chem::ApplyError::None;

  explicit operator bool() const { return product.has_value(); }
  std::string message() const;
};

EvalResult evaluate_postfix(const PostfixProgram& p, const Library& lib,
                            const Registry& reg);

// Elementwise evaluate_postfix across `workers` threads; order preserved,
// per-element failures reported without aborting the batch.
std::vector<EvalResult> detokenize_batch(const std::vector<PostfixProgram>& programs,
                                         const Library& lib,
                                         const Registry& reg, int workers);

}  // namespace prexsyn::synth
