#include "phisim/expr.hpp"

#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace phisim::expr {

struct Node {
  enum class Kind { number, name, negate, binary, call } kind;
  double value = 0.0;
  std::string name;  // variable or function name
  char op = 0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  int height = 1;  // longest path to a leaf; bounds recursion in the tree walks
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

struct FunctionEntry {
  std::string_view name;
  double (*fn)(double);
};

double fn_sin(double x) { return std::sin(x); }
double fn_cos(double x) { return std::cos(x); }
double fn_exp(double x) { return std::exp(x); }
double fn_tanh(double x) { return std::tanh(x); }
double fn_sqrt(double x) { return std::sqrt(x); }
double fn_abs(double x) { return std::fabs(x); }

constexpr std::array<FunctionEntry, 6> kFunctions{{{"sin", fn_sin},
                                                   {"cos", fn_cos},
                                                   {"exp", fn_exp},
                                                   {"tanh", fn_tanh},
                                                   {"sqrt", fn_sqrt},
                                                   {"abs", fn_abs}}};

double (*lookup_function(std::string_view name))(double) {
  for (const auto& f : kFunctions) {
    if (f.name == name) return f.fn;
  }
  return nullptr;
}

std::string_view function_name(double (*fn)(double)) {
  for (const auto& f : kFunctions) {
    if (f.fn == fn) return f.name;
  }
  return "?";
}

struct Token {
  enum class Kind { number, ident, op, lparen, rparen, end } kind;
  std::size_t offset = 0;
  double number = 0.0;
  std::string_view text;
  char op = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return current_; }
  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    current_ = Token{};
    current_.offset = pos_;
    if (pos_ >= src_.size()) {
      current_.kind = Token::Kind::end;
      return;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      current_.kind = Token::Kind::ident;
      current_.text = src_.substr(start, pos_ - start);
    } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      current_.kind = Token::Kind::op;
      current_.op = c;
      ++pos_;
    } else if (c == '(') {
      current_.kind = Token::Kind::lparen;
      ++pos_;
    } else if (c == ')') {
      current_.kind = Token::Kind::rparen;
      ++pos_;
    } else {
      throw ParseError(pos_, std::string("unexpected character '") + c + "'");
    }
  }

  void lex_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError(start, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        // Not an exponent: leave "e" for the identifier lexer to reject.
        pos_ = save;
      }
    }
    double value = 0.0;
    const auto text = src_.substr(start, pos_ - start);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw ParseError(start, "malformed number '" + std::string(text) + "'");
    }
    current_.kind = Token::Kind::number;
    current_.number = value;
    current_.text = text;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token current_;
};

constexpr int kAdditive = 10;
constexpr int kMultiplicative = 20;
constexpr int kUnary = 30;
constexpr int kPower = 40;

int infix_precedence(char op) {
  switch (op) {
    case '+':
    case '-':
      return kAdditive;
    case '*':
    case '/':
      return kMultiplicative;
    case '^':
      return kPower;
  }
  return -1;
}

NodePtr make_binary(char op, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::binary;
  n->op = op;
  n->height = 1 + std::max(lhs->height, rhs->height);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

// Limits that keep the recursive parser and the tree walks off the end of
// the stack. Scenario expressions come nowhere near them.
constexpr int kMaxNesting = 200;
constexpr int kMaxHeight = 2000;

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) {}

  NodePtr parse() {
    NodePtr root = expression(0);
    const Token& t = lexer_.peek();
    if (t.kind != Token::Kind::end) {
      throw ParseError(t.offset, "unexpected trailing input");
    }
    return root;
  }

 private:
  NodePtr expression(int min_precedence) {
    struct Guard {
      int& n;
      ~Guard() { --n; }
    } guard{++nesting_};
    if (nesting_ > kMaxNesting) throw ParseError(lexer_.peek().offset, "expression nested too deeply");
    NodePtr lhs = prefix();
    for (;;) {
      const Token& t = lexer_.peek();
      if (t.kind != Token::Kind::op) break;
      const int prec = infix_precedence(t.op);
      if (prec < min_precedence || prec <= 0) break;
      const std::size_t at = t.offset;
      const char op = lexer_.take().op;
      // ^ is right-associative; everything else associates left.
      NodePtr rhs = expression(op == '^' ? prec : prec + 1);
      lhs = make_binary(op, std::move(lhs), std::move(rhs));
      if (lhs->height > kMaxHeight) throw ParseError(at, "expression too long");
    }
    return lhs;
  }

  NodePtr prefix() {
    Token t = lexer_.take();
    switch (t.kind) {
      case Token::Kind::number: {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::number;
        n->value = t.number;
        return n;
      }
      case Token::Kind::ident: {
        if (lexer_.peek().kind == Token::Kind::lparen) {
          auto fn = lookup_function(t.text);
          if (!fn) throw ParseError(t.offset, "unknown function '" + std::string(t.text) + "'");
          lexer_.take();
          NodePtr arg = expression(0);
          expect_rparen(t.offset);
          auto n = std::make_shared<Node>();
          n->kind = Node::Kind::call;
          n->fn = fn;
          n->name = std::string(t.text);
          n->height = arg->height + 1;
          n->lhs = std::move(arg);
          return n;
        }
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::name;
        n->name = std::string(t.text);
        return n;
      }
      case Token::Kind::lparen: {
        NodePtr inner = expression(0);
        expect_rparen(t.offset);
        return inner;
      }
      case Token::Kind::op:
        if (t.op == '-') {
          auto n = std::make_shared<Node>();
          n->kind = Node::Kind::negate;
          n->lhs = expression(kUnary);
          n->height = n->lhs->height + 1;
          return n;
        }
        throw ParseError(t.offset, std::string("unexpected operator '") + t.op + "'");
      case Token::Kind::rparen:
        throw ParseError(t.offset, "unexpected ')'");
      case Token::Kind::end:
        throw ParseError(t.offset, "unexpected end of input");
    }
    throw ParseError(t.offset, "unexpected token");
  }

  void expect_rparen(std::size_t open_offset) {
    const Token& t = lexer_.peek();
    if (t.kind != Token::Kind::rparen) {
      throw ParseError(t.offset, "expected ')' to close '(' at offset " +
                                     std::to_string(open_offset));
    }
    lexer_.take();
  }

  Lexer lexer_;
  int nesting_ = 0;
};

double apply_binary(char op, double a, double b) {
  switch (op) {
    case '+':
      return a + b;
    case '-':
      return a - b;
    case '*':
      return a * b;
    case '/':
      return a / b;
    case '^':
      return std::pow(a, b);
  }
  return std::nan("");
}

double evaluate_node(const Node& n, const Bindings& b) {
  switch (n.kind) {
    case Node::Kind::number:
      return n.value;
    case Node::Kind::name: {
      auto it = b.find(n.name);
      if (it != b.end()) return it->second;
      if (n.name == "pi") return std::numbers::pi;
      throw InvalidArgument("unbound variable '" + n.name + "'");
    }
    case Node::Kind::negate:
      return -evaluate_node(*n.lhs, b);
    case Node::Kind::binary:
      return apply_binary(n.op, evaluate_node(*n.lhs, b), evaluate_node(*n.rhs, b));
    case Node::Kind::call:
      return n.fn(evaluate_node(*n.lhs, b));
  }
  return std::nan("");
}

void print_node(const Node& n, std::ostringstream& os) {
  switch (n.kind) {
    case Node::Kind::number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      os << buf;
      return;
    }
    case Node::Kind::name:
      os << n.name;
      return;
    case Node::Kind::negate:
      os << "(-";
      print_node(*n.lhs, os);
      os << ")";
      return;
    case Node::Kind::binary:
      os << "(";
      print_node(*n.lhs, os);
      os << " " << n.op << " ";
      print_node(*n.rhs, os);
      os << ")";
      return;
    case Node::Kind::call:
      os << function_name(n.fn) << "(";
      print_node(*n.lhs, os);
      os << ")";
      return;
  }
}

void collect_names(const Node& n, std::set<std::string>& out) {
  if (n.kind == Node::Kind::name) out.insert(n.name);
  if (n.lhs) collect_names(*n.lhs, out);
  if (n.rhs) collect_names(*n.rhs, out);
}

}  // namespace

ParseError::ParseError(std::size_t offset, const std::string& message)
    : InvalidArgument("syntax error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset) {}

Expression::Expression(std::shared_ptr<const Node> root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

Expression Expression::parse(std::string_view source) {
  Parser p(source);
  return Expression(p.parse(), std::string(source));
}

double Expression::evaluate(const Bindings& bindings) const {
  return evaluate_node(*root_, bindings);
}

std::string Expression::to_string() const {
  std::ostringstream os;
  print_node(*root_, os);
  return os.str();
}

std::set<std::string> Expression::free_names() const {
  std::set<std::string> names;
  collect_names(*root_, names);
  return names;
}

bool Expression::references(std::string_view name) const {
  return free_names().count(std::string(name)) > 0;
}

bool Expression::is_zero_literal() const {
  return root_->kind == Node::Kind::number && root_->value == 0.0;
}

Compiled::Compiled(const Expression& e, const std::vector<std::string>& slot_names,
                   const Bindings& constants) {
  std::size_t depth = 0;
  auto emit = [&](Instruction ins, int stack_delta) {
    program_.push_back(ins);
    depth = static_cast<std::size_t>(static_cast<long>(depth) + stack_delta);
    max_depth_ = std::max(max_depth_, depth);
  };
  std::function<void(const Node&)> lower = [&](const Node& n) {
    using Op = Instruction::Op;
    switch (n.kind) {
      case Node::Kind::number:
        emit({Op::push, n.value}, +1);
        return;
      case Node::Kind::name: {
        for (std::size_t s = 0; s < slot_names.size(); ++s) {
          if (slot_names[s] == n.name) {
            emit({Op::load, 0.0, s}, +1);
            return;
          }
        }
        auto it = constants.find(n.name);
        if (it != constants.end()) {
          emit({Op::push, it->second}, +1);
        } else if (n.name == "pi") {
          emit({Op::push, std::numbers::pi}, +1);
        } else {
          throw InvalidArgument("unbound variable '" + n.name + "' in expression '" +
                                e.source() + "'");
        }
        return;
      }
      case Node::Kind::negate:
        lower(*n.lhs);
        emit({Op::neg}, 0);
        return;
      case Node::Kind::binary: {
        lower(*n.lhs);
        lower(*n.rhs);
        Op op = Op::add;
        switch (n.op) {
          case '+':
            op = Op::add;
            break;
          case '-':
            op = Op::sub;
            break;
          case '*':
            op = Op::mul;
            break;
          case '/':
            op = Op::div;
            break;
          case '^':
            op = Op::pow;
            break;
        }
        emit({op}, -1);
        return;
      }
      case Node::Kind::call:
        lower(*n.lhs);
        emit({Op::call, 0.0, 0, n.fn}, 0);
        return;
    }
  };
  lower(*e.root_);
}

double Compiled::operator()(std::span<const double> slots) const {
  constexpr std::size_t kInline = 64;
  std::array<double, kInline> inline_stack{};
  std::vector<double> heap_stack;
  double* stack = inline_stack.data();
  if (max_depth_ > kInline) {
    heap_stack.resize(max_depth_);
    stack = heap_stack.data();
  }
  std::size_t top = 0;
  using Op = Instruction::Op;
  for (const Instruction& ins : program_) {
    switch (ins.op) {
      case Op::push:
        stack[top++] = ins.value;
        break;
      case Op::load:
        stack[top++] = slots[ins.slot];
        break;
      case Op::neg:
        stack[top - 1] = -stack[top - 1];
        break;
      case Op::call:
        stack[top - 1] = ins.fn(stack[top - 1]);
        break;
      default: {
        const double b = stack[--top];
        const double a = stack[top - 1];
        const char op = ins.op == Op::add   ? '+'
                        : ins.op == Op::sub ? '-'
                        : ins.op == Op::mul ? '*'
                        : ins.op == Op::div ? '/'
                                            : '^';
        stack[top - 1] = apply_binary(op, a, b);
      }
    }
  }
  return stack[0];
}

ScalarField sample(const Expression& e, const Grid& grid, const Bindings& bindings, double t) {
  static const char* kCoord[3] = {"x", "y", "z"};
  static const char* kLength[3] = {"Lx", "Ly", "Lz"};

  Bindings constants = bindings;
  constants["t"] = t;
  std::vector<std::string> slots;
  for (int a = 0; a < grid.dims(); ++a) {
    constants[kLength[a]] = grid.length(a);
    constants.erase(kCoord[a]);
    slots.emplace_back(kCoord[a]);
  }
  const Compiled program(e, slots, constants);

  ScalarField out(grid);
  std::array<double, 3> coords{};
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto idx = grid.unflatten(p);
    for (int a = 0; a < grid.dims(); ++a) coords[a] = grid.coordinate(a, idx[a]);
    const double v = program(std::span<const double>(coords.data(), grid.dims()));
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "non-finite sample of '" << e.source() << "' at";
      for (int a = 0; a < grid.dims(); ++a) os << " " << kCoord[a] << "=" << coords[a];
      os << " t=" << t;
      throw InvalidArgument(os.str());
    }
    out[p] = v;
  }
  return out;
}

}  // namespace phisim::expr
