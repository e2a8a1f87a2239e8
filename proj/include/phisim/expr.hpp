#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phisim/grid.hpp"

// Arithmetic expressions for scenario files: real literals, names, + - * / ^,
// unary minus and the functions sin cos exp tanh sqrt abs. ^ binds tightest
// and is right-associative, then unary minus, then * /, then + -.
namespace phisim::expr {

class ParseError : public InvalidArgument {
 public:
  ParseError(std::size_t offset, const std::string& message);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Names resolved at evaluation time.
using Bindings = std::map<std::string, double, std::less<>>;

struct Node;

class Expression {
 public:
  static Expression parse(std::string_view source);

  /// Evaluates with names looked up in bindings; pi resolves to its value
  /// unless bound explicitly. Throws InvalidArgument on an unbound name.
  double evaluate(const Bindings& bindings) const;

  /// Fully parenthesized form; parses back to an equivalent tree.
  std::string to_string() const;

  std::set<std::string> free_names() const;
  bool references(std::string_view name) const;
  /// True when the tree is the literal 0.
  bool is_zero_literal() const;

  const std::string& source() const { return source_; }

 private:
  Expression(std::shared_ptr<const Node> root, std::string source);

  std::shared_ptr<const Node> root_;
  std::string source_;

  friend class Compiled;
};

/// An expression lowered to a stack program over a fixed list of slots.
/// Immutable and reentrant.
class Compiled {
 public:
  /// Names not among slot_names are looked up in constants; any other name
  /// is an unbound-variable error.
  Compiled(const Expression& e, const std::vector<std::string>& slot_names,
           const Bindings& constants);

  double operator()(std::span<const double> slots) const;

 private:
  struct Instruction {
    enum class Op { push, load, neg, add, sub, mul, div, pow, call } op;
    double value = 0.0;
    std::size_t slot = 0;
    double (*fn)(double) = nullptr;
  };
  std::vector<Instruction> program_;
  std::size_t max_depth_ = 0;
};

/// Evaluates e at every cell center of the grid at time t. The coordinates
/// x, y, z of the active axes, the box lengths Lx, Ly, Lz and t are bound
/// automatically on top of bindings. Non-finite samples are an error.
ScalarField sample(const Expression& e, const Grid& grid, const Bindings& bindings, double t);

}  // namespace phisim::expr
