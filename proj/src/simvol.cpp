#include "bstraight/simvol.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace bstraight {

namespace {

struct Token {
  enum class Kind { Ident, Number, LParen, RParen, Comma, Equal, LBracket,
                    RBracket, End };
  Kind kind;
  std::string text;
  double value = 0.0;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_])))
      bump();
    tok_.pos = SourcePos{line_, col_};
    if (i_ >= text_.size()) {
      tok_.kind = Token::Kind::End;
      tok_.text = "<end>";
      return;
    }
    const char c = text_[i_];
    switch (c) {
      case '(': tok_ = {Token::Kind::LParen, "(", 0, tok_.pos}; bump(); return;
      case ')': tok_ = {Token::Kind::RParen, ")", 0, tok_.pos}; bump(); return;
      case ',': tok_ = {Token::Kind::Comma, ",", 0, tok_.pos}; bump(); return;
      case '=': tok_ = {Token::Kind::Equal, "=", 0, tok_.pos}; bump(); return;
      case '[': tok_ = {Token::Kind::LBracket, "[", 0, tok_.pos}; bump(); return;
      case ']': tok_ = {Token::Kind::RBracket, "]", 0, tok_.pos}; bump(); return;
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (i_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[i_])) ||
              text_[i_] == '_')) {
        s += text_[i_];
        bump();
      }
      if (s == "inf") {
        tok_.kind = Token::Kind::Number;
        tok_.value = std::numeric_limits<double>::infinity();
        tok_.text = s;
        return;
      }
      tok_.kind = Token::Kind::Ident;
      tok_.text = s;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
        c == '.') {
      std::size_t start = i_;
      if (text_[i_] == '-' || text_[i_] == '+') bump();
      bool any = false;
      while (i_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[i_])) ||
              text_[i_] == '.' || text_[i_] == 'e' || text_[i_] == 'E' ||
              ((text_[i_] == '-' || text_[i_] == '+') && i_ > start &&
               (text_[i_ - 1] == 'e' || text_[i_ - 1] == 'E')))) {
        any = true;
        bump();
      }
      if (!any) throw SyntaxError("malformed number", tok_.pos);
      tok_.kind = Token::Kind::Number;
      tok_.text = text_.substr(start, i_ - start);
      try {
        tok_.value = std::stod(tok_.text);
      } catch (const std::exception&) {
        throw SyntaxError("malformed number '" + tok_.text + "'", tok_.pos);
      }
      return;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'",
                      tok_.pos);
  }

  void bump() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  const std::string& text_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

struct Arg {
  std::string name;  // empty for positional
  bool is_expr = false;
  SimvolExpr expr;
  bool is_interval = false;
  double value = 0.0;
  double value2 = 0.0;
  SourcePos pos;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  SimvolExpr parse() {
    SimvolExpr e = expression();
    if (lex_.peek().kind != Token::Kind::End)
      throw SyntaxError("trailing input after expression", lex_.peek().pos);
    return e;
  }

 private:
  Token expect(Token::Kind k, const std::string& what) {
    if (lex_.peek().kind != k)
      throw SyntaxError("expected " + what + ", found '" + lex_.peek().text +
                            "'",
                        lex_.peek().pos);
    return lex_.take();
  }

  SimvolExpr expression() {
    const Token name = expect(Token::Kind::Ident, "a constructor name");
    expect(Token::Kind::LParen, "'('");
    std::vector<Arg> args;
    if (lex_.peek().kind != Token::Kind::RParen) {
      args.push_back(argument());
      while (lex_.peek().kind == Token::Kind::Comma) {
        lex_.take();
        args.push_back(argument());
      }
    }
    expect(Token::Kind::RParen, "')'");
    return build(name, args);
  }

  Arg argument() {
    Arg a;
    a.pos = lex_.peek().pos;
    if (lex_.peek().kind == Token::Kind::Ident) {
      // Could be name=value, name=[lo,hi], or a sub-expression.
      Token id = lex_.take();
      if (lex_.peek().kind == Token::Kind::Equal) {
        lex_.take();
        a.name = id.text;
        if (lex_.peek().kind == Token::Kind::LBracket) {
          lex_.take();
          a.value = expect(Token::Kind::Number, "a number").value;
          expect(Token::Kind::Comma, "','");
          a.value2 = expect(Token::Kind::Number, "a number").value;
          expect(Token::Kind::RBracket, "']'");
          a.is_interval = true;
        } else {
          a.value = expect(Token::Kind::Number, "a number").value;
        }
        return a;
      }
      if (lex_.peek().kind == Token::Kind::LParen) {
        lex_.take();
        std::vector<Arg> args;
        if (lex_.peek().kind != Token::Kind::RParen) {
          args.push_back(argument());
          while (lex_.peek().kind == Token::Kind::Comma) {
            lex_.take();
            args.push_back(argument());
          }
        }
        expect(Token::Kind::RParen, "')'");
        a.is_expr = true;
        a.expr = build(id, args);
        return a;
      }
      throw SyntaxError("expected '=' or '(' after '" + id.text + "'",
                        lex_.peek().pos);
    }
    if (lex_.peek().kind == Token::Kind::Number) {
      a.value = lex_.take().value;
      return a;
    }
    throw SyntaxError("expected an argument, found '" + lex_.peek().text + "'",
                      lex_.peek().pos);
  }

  static const Arg* find(const std::vector<Arg>& args, const std::string& n) {
    for (const auto& a : args)
      if (a.name == n) return &a;
    return nullptr;
  }

  SimvolExpr build(const Token& name, const std::vector<Arg>& args) {
    SimvolExpr e;
    e.pos = name.pos;
    if (name.text == "surface") {
      e.kind = SimvolExpr::Kind::Surface;
      e.dim = 2;
      const Arg* g = find(args, "genus");
      if (!g && args.size() == 1 && args[0].name.empty() && !args[0].is_expr)
        g = &args[0];
      if (!g) throw SemanticError("surface requires genus=<int>", name.pos);
      e.genus = static_cast<int>(g->value);
      if (e.genus < 2 || e.genus != g->value)
        throw SemanticError("surface genus must be an integer >= 2", g->pos);
      return e;
    }
    if (name.text == "hyperbolic") {
      e.kind = SimvolExpr::Kind::Hyperbolic;
      const Arg* n = find(args, "n");
      if (!n && !args.empty() && args[0].name.empty() && !args[0].is_expr)
        n = &args[0];
      if (!n) throw SemanticError("hyperbolic requires a dimension", name.pos);
      e.n = static_cast<int>(n->value);
      if (e.n < 2 || e.n != n->value)
        throw SemanticError("hyperbolic dimension must be an integer >= 2",
                            n->pos);
      e.dim = e.n;
      const Arg* v = find(args, "vol");
      if (!v) throw SemanticError("hyperbolic requires vol=<real>", name.pos);
      if (!(v->value > 0.0))
        throw SemanticError("hyperbolic volume must be positive", v->pos);
      e.vol = v->value;
      e.has_vol = true;
      return e;
    }
    if (name.text == "product" || name.text == "connect_sum") {
      e.kind = name.text == "product" ? SimvolExpr::Kind::Product
                                      : SimvolExpr::Kind::ConnectSum;
      for (const auto& a : args) {
        if (!a.is_expr)
          throw SemanticError(name.text + " takes manifold sub-expressions",
                              a.pos);
        e.children.push_back(a.expr);
      }
      if (e.children.size() != 2)
        throw SemanticError(name.text + " takes exactly two factors",
                            name.pos);
      if (e.kind == SimvolExpr::Kind::Product) {
        e.dim = e.children[0].dim + e.children[1].dim;
      } else {
        if (e.children[0].dim != e.children[1].dim)
          throw SemanticError("connect_sum factors must have equal dimension",
                              name.pos);
        e.dim = e.children[0].dim;
        if (e.dim < 3)
          throw SemanticError("connect_sum requires dimension >= 3 (got " +
                                  std::to_string(e.dim) + ")",
                              name.pos);
      }
      return e;
    }
    if (name.text == "opaque") {
      e.kind = SimvolExpr::Kind::Opaque;
      const Arg* d = find(args, "dim");
      if (!d) throw SemanticError("opaque requires dim=<int>", name.pos);
      e.dim = static_cast<int>(d->value);
      if (e.dim < 1 || e.dim != d->value)
        throw SemanticError("opaque dimension must be a positive integer",
                            d->pos);
      const Arg* sv = find(args, "simvol");
      if (!sv || !sv->is_interval)
        throw SemanticError("opaque requires simvol=[lo,hi]", name.pos);
      e.lo = sv->value;
      e.hi = sv->value2;
      if (!(0.0 <= e.lo && e.lo <= e.hi))
        throw SemanticError("opaque interval must satisfy 0 <= lo <= hi",
                            sv->pos);
      if (const Arg* v = find(args, "vol")) {
        if (!(v->value > 0.0))
          throw SemanticError("opaque volume must be positive", v->pos);
        e.vol = v->value;
        e.has_vol = true;
      }
      return e;
    }
    throw SemanticError("unknown constructor '" + name.text + "'", name.pos);
  }

  Lexer lex_;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

SimvolExpr parse_expression(const std::string& text) {
  return Parser(text).parse();
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double registry_vn(int n, const SimvolConfig& config) {
  if (auto it = config.vn_override.find(n); it != config.vn_override.end())
    return it->second;
  if (n == 2) return kIdealSimplexVolumeH2;
  if (n == 3) return kIdealSimplexVolumeH3;
  throw UnknownConstantError(
      "v_" + std::to_string(n) +
      " is not in the shipped registry; configure an override");
}

BoundInterval evaluate(const SimvolExpr& e, const SimvolConfig& config) {
  BoundInterval out;
  out.dim = e.dim;
  switch (e.kind) {
    case SimvolExpr::Kind::Surface: {
      const double v = 4.0 * e.genus - 4.0;
      out.lo = out.hi = v;
      out.vol = 4.0 * M_PI * (e.genus - 1);
      out.trace.push_back("surface(genus=" + std::to_string(e.genus) +
                          "): exact value 4g-4 = " + fmt(v));
      return out;
    }
    case SimvolExpr::Kind::Hyperbolic: {
      const double vn = registry_vn(e.n, config);
      const double v = e.vol / vn;
      out.lo = out.hi = v;
      out.vol = e.vol;
      const bool overridden = config.vn_override.count(e.n) > 0;
      out.trace.push_back("hyperbolic(n=" + std::to_string(e.n) +
                          ", vol=" + fmt(e.vol) + "): vol / v_" +
                          std::to_string(e.n) + ", v_" + std::to_string(e.n) +
                          " = " + fmt(vn) +
                          (overridden ? " (override)" : " (registry)"));
      return out;
    }
    case SimvolExpr::Kind::Opaque: {
      out.lo = e.lo;
      out.hi = e.hi;
      if (e.has_vol) out.vol = e.vol;
      out.trace.push_back("opaque(dim=" + std::to_string(e.dim) + "): [" +
                          fmt(e.lo) + ", " + fmt(e.hi) + "] (given)");
      return out;
    }
    case SimvolExpr::Kind::Product: {
      const BoundInterval a = evaluate(e.children[0], config);
      const BoundInterval b = evaluate(e.children[1], config);
      out.trace = a.trace;
      out.trace.insert(out.trace.end(), b.trace.begin(), b.trace.end());
      double c;
      bool overridden = false;
      if (auto it = config.product_constant_override.find(e.dim);
          it != config.product_constant_override.end()) {
        c = it->second;
        overridden = true;
      } else {
        c = binomial(e.dim, e.children[0].dim);
      }
      out.lo = a.lo * b.lo;
      out.hi = c * a.hi * b.hi;
      if (a.vol && b.vol) out.vol = *a.vol * *b.vol;
      out.trace.push_back(
          "product(dim=" + std::to_string(e.dim) +
          "): lower bound multiplicative (exact); upper constant C(" +
          std::to_string(e.dim) + ") = " + fmt(c) +
          (overridden ? " (configured override" : " (configured default binomial(" +
                            std::to_string(e.dim) + "," +
                            std::to_string(e.children[0].dim) + ")") +
          ", not a derived constant)");
      return out;
    }
    case SimvolExpr::Kind::ConnectSum: {
      const BoundInterval a = evaluate(e.children[0], config);
      const BoundInterval b = evaluate(e.children[1], config);
      out.trace = a.trace;
      out.trace.insert(out.trace.end(), b.trace.begin(), b.trace.end());
      out.lo = a.lo + b.lo;
      out.hi = a.hi + b.hi;
      out.trace.push_back("connect_sum(dim=" + std::to_string(e.dim) +
                          "): additive (exact)");
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

long long degree_bound(const BoundInterval& N, const BoundInterval& M) {
  if (N.dim != M.dim)
    throw std::invalid_argument("degree_bound: dimensions differ");
  if (M.lo == 0.0)
    throw IndeterminateError(
        "degree_bound: ||M|| lower bound is 0; no bound available");
  if (N.lo == 0.0 && N.hi == 0.0) return 0;
  return static_cast<long long>(std::floor(N.hi / M.lo));
}

double euler_bound(const BoundInterval& M) {
  return std::ldexp(M.hi, -M.dim);
}

}  // namespace bstraight
