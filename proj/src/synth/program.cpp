#include "prexsyn/synth/program.hpp"

#include <atomic>
#include <charconv>
#include <thread>

#include "prexsyn/util/errors.hpp"

namespace prexsyn::synth {

bool is_grammar_valid(const PostfixProgram& p, const Library& lib,
                      const Registry& reg) {
  int depth = 0;
  for (const Token& t : p.tokens) {
    switch (t.type) {
      case TokenType::BB:
        if (t.id < 0 || t.id >= lib.size()) return false;
        ++depth;
        break;
      case TokenType::RXN: {
        if (t.id < 0 || t.id >= reg.size()) return false;
        int arity = reg.rxn(t.id).arity;
        if (depth < arity) return false;
        depth -= arity - 1;
        break;
      }
      default:
        return false;  // sentinels are not stored in programs
    }
  }
  return depth == 1;
}

std::string program_to_string(const PostfixProgram& p) {
  std::string out;
  for (std::size_t i = 0; i < p.tokens.size(); ++i) {
    if (i) out += ' ';
    const Token& t = p.tokens[i];
    out += (t.type == TokenType::BB) ? 'B' : 'R';
    out += std::to_string(t.id);
  }
  return out;
}

PostfixProgram program_from_string(std::string_view text) {
  PostfixProgram p;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size()) break;
    char kind = text[pos];
    if (kind != 'B' && kind != 'R')
      throw ParseError("expected token tag B or R", pos);
    ++pos;
    int id = 0;
    auto [ptr, ec] =
        std::from_chars(text.data() + pos, text.data() + text.size(), id);
    if (ec != std::errc() || ptr == text.data() + pos)
      throw ParseError("expected token id", pos);
    pos = static_cast<std::size_t>(ptr - text.data());
    p.tokens.push_back(kind == 'B' ? Token::bb(id) : Token::rxn(id));
  }
  return p;
}

std::string EvalResult::message() const {
  switch (error) {
    case EvalErrorKind::None:
      return "ok";
    case EvalErrorKind::MalformedProgram:
      return "malformed program at token " + std::to_string(position);
    case EvalErrorKind::ReactionFailed:
      return "reaction failed at token " + std::to_string(position);
  }
  return "unknown";
}

EvalResult evaluate_postfix(const PostfixProgram& p, const Library& lib,
                            const Registry& reg) {
  EvalResult result;
  std::vector<chem::MolGraph> stack;
  for (std::size_t i = 0; i < p.tokens.size(); ++i) {
    const Token& t = p.tokens[i];
    if (t.type == TokenType::BB) {
      if (t.id < 0 || t.id >= lib.size()) {
        result.error = EvalErrorKind::MalformedProgram;
        result.position = static_cast<int>(i);
        return result;
      }
      stack.push_back(lib.block(t.id).graph);
    } else if (t.type == TokenType::RXN) {
      if (t.id < 0 || t.id >= reg.size()) {
        result.error = EvalErrorKind::MalformedProgram;
        result.position = static_cast<int>(i);
        return result;
      }
      const auto& rxn = reg.rxn(t.id);
      if (static_cast<int>(stack.size()) < rxn.arity) {
        result.error = EvalErrorKind::MalformedProgram;
        result.position = static_cast<int>(i);
        return result;
      }
      // top of stack is the last operand
      std::vector<chem::MolGraph> operands(rxn.arity);
      for (int k = rxn.arity - 1; k >= 0; --k) {
        operands[k] = std::move(stack.back());
        stack.pop_back();
      }
      auto applied = chem::apply_template(rxn, operands);
      if (!applied) {
        result.error = EvalErrorKind::ReactionFailed;
        result.position = static_cast<int>(i);
        result.apply_error = applied.error;
        return result;
      }
      stack.push_back(std::move(*applied.product));
    } else {
      result.error = EvalErrorKind::MalformedProgram;
      result.position = static_cast<int>(i);
      return result;
    }
  }
  if (stack.size() != 1) {
    result.error = EvalErrorKind::MalformedProgram;
    result.position = static_cast<int>(p.tokens.size());
    return result;
  }
  result.product = std::move(stack.back());
  return result;
}

std::vector<EvalResult> detokenize_batch(const std::vector<PostfixProgram>& programs,
                                         const Library& lib,
                                         const Registry& reg, int workers) {
  std::vector<EvalResult> results(programs.size());
  if (workers <= 1 || programs.size() < 2) {
    for (std::size_t i = 0; i < programs.size(); ++i)
      results[i] = evaluate_postfix(programs[i], lib, reg);
    return results;
  }
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= programs.size()) return;
      results[i] = evaluate_postfix(programs[i], lib, reg);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace prexsyn::synth
