#include "mvlc/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace mvlc {

namespace {

const std::set<std::string> kFunctions = {"exp", "log", "sqrt", "sin",
                                          "cos", "sinh", "cosh", "abs"};

struct Token {
  enum Type { Number, Ident, Op, LParen, RParen, End } type;
  std::string text;
  double value = 0.0;
  int line = 1, column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      bump();
    }
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= src_.size()) {
      current_ = {Token::End, "", 0.0, line_, column_};
      return;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ident += src_[pos_];
        bump();
      }
      current_ = {Token::Ident, ident, 0.0, line_, column_ - static_cast<int>(ident.size())};
    } else if (c == '(') {
      current_ = {Token::LParen, "(", 0.0, line_, column_};
      bump();
    } else if (c == ')') {
      current_ = {Token::RParen, ")", 0.0, line_, column_};
      bump();
    } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      current_ = {Token::Op, std::string(1, c), 0.0, line_, column_};
      bump();
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
    }
  }

  void lex_number() {
    const int start_line = line_, start_col = column_;
    std::string text;
    auto eat_digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        text += src_[pos_];
        bump();
      }
    };
    eat_digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      text += '.';
      bump();
      eat_digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      text += src_[pos_];
      bump();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
        text += src_[pos_];
        bump();
      }
      if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        throw ParseError("malformed exponent in number literal", start_line, start_col);
      }
      eat_digits();
    }
    if (text.empty() || text == ".") {
      throw ParseError("malformed number literal", start_line, start_col);
    }
    current_ = {Token::Number, text, std::stod(text), start_line, start_col};
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, column_ = 1;
  Token current_;
};

class Parser {
 public:
  Parser(const std::string& src, const std::vector<std::string>& variables)
      : lexer_(src), variables_(variables.begin(), variables.end()) {}

  ExprPtr parse() {
    ExprPtr e = parse_sum();
    const Token& t = lexer_.peek();
    if (t.type != Token::End) {
      throw ParseError("unexpected trailing input '" + t.text + "'", t.line, t.column);
    }
    return e;
  }

 private:
  ExprPtr parse_sum() {
    ExprPtr lhs = parse_term();
    while (lexer_.peek().type == Token::Op &&
           (lexer_.peek().text == "+" || lexer_.peek().text == "-")) {
      Token op = lexer_.take();
      ExprPtr rhs = parse_term();
      lhs = make_binary(op.text[0], lhs, rhs, op);
    }
    return lhs;
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    while (lexer_.peek().type == Token::Op &&
           (lexer_.peek().text == "*" || lexer_.peek().text == "/")) {
      Token op = lexer_.take();
      ExprPtr rhs = parse_unary();
      lhs = make_binary(op.text[0], lhs, rhs, op);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (lexer_.peek().type == Token::Op && lexer_.peek().text == "-") {
      Token op = lexer_.take();
      ExprPtr operand = parse_unary();
      auto node = std::make_shared<Expr>();
      node->kind = ExprKind::Unary;
      node->op = '-';
      node->lhs = operand;
      node->line = op.line;
      node->column = op.column;
      return node;
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    if (lexer_.peek().type == Token::Op && lexer_.peek().text == "^") {
      Token op = lexer_.take();
      // exponent may carry a sign: 2^-3
      ExprPtr exponent = parse_unary();
      return make_binary('^', base, exponent, op);
    }
    return base;
  }

  ExprPtr parse_primary() {
    Token t = lexer_.take();
    switch (t.type) {
      case Token::Number: {
        auto node = std::make_shared<Expr>();
        node->kind = ExprKind::Number;
        node->number = t.value;
        node->line = t.line;
        node->column = t.column;
        return node;
      }
      case Token::Ident: {
        if (lexer_.peek().type == Token::LParen) {
          if (!kFunctions.count(t.text)) {
            throw ParseError("unknown function '" + t.text + "'", t.line, t.column);
          }
          lexer_.take();  // '('
          ExprPtr arg = parse_sum();
          expect_rparen(t);
          auto node = std::make_shared<Expr>();
          node->kind = ExprKind::Call;
          node->name = t.text;
          node->lhs = arg;
          node->line = t.line;
          node->column = t.column;
          return node;
        }
        if (kFunctions.count(t.text)) {
          throw ParseError("function '" + t.text + "' requires one argument", t.line,
                           t.column);
        }
        if (!variables_.count(t.text)) {
          throw ParseError("unknown identifier '" + t.text + "'", t.line, t.column);
        }
        auto node = std::make_shared<Expr>();
        node->kind = ExprKind::Variable;
        node->name = t.text;
        node->line = t.line;
        node->column = t.column;
        return node;
      }
      case Token::LParen: {
        ExprPtr inner = parse_sum();
        expect_rparen(t);
        return inner;
      }
      default:
        throw ParseError("expected a value, got '" + (t.type == Token::End ? std::string("end of input") : t.text) + "'",
                         t.line, t.column);
    }
  }

  void expect_rparen(const Token& opener) {
    Token t = lexer_.take();
    if (t.type != Token::RParen) {
      throw ParseError("missing ')' for group opened", opener.line, opener.column);
    }
  }

  static ExprPtr make_binary(char op, ExprPtr lhs, ExprPtr rhs, const Token& tok) {
    auto node = std::make_shared<Expr>();
    node->kind = ExprKind::Binary;
    node->op = op;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    node->line = tok.line;
    node->column = tok.column;
    return node;
  }

  Lexer lexer_;
  std::set<std::string> variables_;
};

bool is_integer_literal(const Expr& e, long long* out) {
  const Expr* node = &e;
  bool negate = false;
  while (node->kind == ExprKind::Unary) {
    negate = !negate;
    node = node->lhs.get();
  }
  if (node->kind != ExprKind::Number) return false;
  const double v = negate ? -node->number : node->number;
  if (std::floor(v) != v || std::abs(v) > 1e9) return false;
  *out = static_cast<long long>(v);
  return true;
}

double pow_integer(double base, long long exponent) {
  if (exponent < 0) return 1.0 / pow_integer(base, -exponent);
  double result = 1.0;
  double factor = base;
  while (exponent > 0) {
    if (exponent & 1) result *= factor;
    factor *= factor;
    exponent >>= 1;
  }
  return result;
}

int precedence_of(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Binary:
      if (e.op == '+' || e.op == '-') return 1;
      if (e.op == '*' || e.op == '/') return 2;
      return 4;  // ^
    case ExprKind::Unary:
      return 3;
    default:
      return 5;
  }
}

void print_node(const Expr& e, std::ostream& os, int parent_prec, bool rhs_of_parent) {
  const int prec = precedence_of(e);
  const bool parens = prec < parent_prec || (prec == parent_prec && rhs_of_parent);
  if (parens) os << '(';
  switch (e.kind) {
    case ExprKind::Number: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << e.number;
      os << tmp.str();
      break;
    }
    case ExprKind::Variable:
      os << e.name;
      break;
    case ExprKind::Unary:
      os << '-';
      print_node(*e.lhs, os, prec, true);
      break;
    case ExprKind::Binary:
      // '^' is right-associative, the rest left-associative
      print_node(*e.lhs, os, prec, e.op == '^');
      os << ' ' << e.op << ' ';
      print_node(*e.rhs, os, prec, e.op != '^');
      break;
    case ExprKind::Call:
      os << e.name << '(';
      print_node(*e.lhs, os, 0, false);
      os << ')';
      break;
  }
  if (parens) os << ')';
}

void collect_variables(const Expr& e, std::set<std::string>& out) {
  if (e.kind == ExprKind::Variable) out.insert(e.name);
  if (e.lhs) collect_variables(*e.lhs, out);
  if (e.rhs) collect_variables(*e.rhs, out);
}

}  // namespace

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Number:
      return a.number == b.number;
    case ExprKind::Variable:
      return a.name == b.name;
    case ExprKind::Unary:
      return expr_equal(*a.lhs, *b.lhs);
    case ExprKind::Binary:
      return a.op == b.op && expr_equal(*a.lhs, *b.lhs) && expr_equal(*a.rhs, *b.rhs);
    case ExprKind::Call:
      return a.name == b.name && expr_equal(*a.lhs, *b.lhs);
  }
  return false;
}

ExprPtr parse_expr(const std::string& source,
                   const std::vector<std::string>& variables) {
  Parser parser(source, variables);
  return parser.parse();
}

double eval_expr(const Expr& e, const Bindings& bindings) {
  double result = 0.0;
  switch (e.kind) {
    case ExprKind::Number:
      result = e.number;
      break;
    case ExprKind::Variable: {
      auto it = bindings.find(e.name);
      if (it == bindings.end()) throw EvalError("unbound variable '" + e.name + "'");
      result = it->second;
      break;
    }
    case ExprKind::Unary:
      result = -eval_expr(*e.lhs, bindings);
      break;
    case ExprKind::Binary: {
      if (e.op == '^') {
        long long k = 0;
        if (is_integer_literal(*e.rhs, &k)) {
          result = pow_integer(eval_expr(*e.lhs, bindings), k);
        } else {
          const double base = eval_expr(*e.lhs, bindings);
          const double exponent = eval_expr(*e.rhs, bindings);
          if (base <= 0.0) {
            throw DomainError("non-integer power requires a positive base, got base = " +
                              std::to_string(base));
          }
          result = std::pow(base, exponent);
        }
        break;
      }
      const double a = eval_expr(*e.lhs, bindings);
      const double b = eval_expr(*e.rhs, bindings);
      switch (e.op) {
        case '+': result = a + b; break;
        case '-': result = a - b; break;
        case '*': result = a * b; break;
        case '/': result = a / b; break;
        default: throw EvalError(std::string("unknown operator '") + e.op + "'");
      }
      break;
    }
    case ExprKind::Call: {
      const double a = eval_expr(*e.lhs, bindings);
      if (e.name == "exp") result = std::exp(a);
      else if (e.name == "log") {
        if (a <= 0.0) throw DomainError("log of non-positive value " + std::to_string(a));
        result = std::log(a);
      } else if (e.name == "sqrt") {
        if (a < 0.0) throw DomainError("sqrt of negative value " + std::to_string(a));
        result = std::sqrt(a);
      } else if (e.name == "sin") result = std::sin(a);
      else if (e.name == "cos") result = std::cos(a);
      else if (e.name == "sinh") result = std::sinh(a);
      else if (e.name == "cosh") result = std::cosh(a);
      else if (e.name == "abs") result = std::abs(a);
      else throw EvalError("unknown function '" + e.name + "'");
      break;
    }
  }
  if (!std::isfinite(result)) {
    throw EvalError("expression evaluated to a non-finite value");
  }
  return result;
}

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  print_node(e, os, 0, false);
  return os.str();
}

std::vector<std::string> expr_variables(const Expr& e) {
  std::set<std::string> vars;
  collect_variables(e, vars);
  return {vars.begin(), vars.end()};
}

}  // namespace mvlc
