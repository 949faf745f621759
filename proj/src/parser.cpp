#include "folio/parser.hpp"

#include <cctype>
#include <map>

namespace folio {

namespace {

enum class Tok { Ident, Exists, Forall, LParen, RParen, Comma, Dot, Colon, And, Or, Not, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '\'';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) { advance(); }

  Formula parse() {
    Formula f = formula();
    if (tok_.kind != Tok::End) fail("unexpected '" + tok_.text + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { fail_at(message, tok_.offset); }

  [[noreturn]] void fail_at(const std::string& message, std::size_t offset) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("syntax error: " + message, offset, line, col);
  }

  void advance() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {  // comment to end of line
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
    std::size_t start = pos_;
    if (pos_ >= text_.size()) {
      tok_ = {Tok::End, "end of input", start};
      return;
    }
    char c = text_[pos_];
    auto single = [&](Tok k) {
      ++pos_;
      tok_ = {k, std::string(1, c), start};
    };
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case ',': return single(Tok::Comma);
      case '.': return single(Tok::Dot);
      case ':': return single(Tok::Colon);
      case '&': return single(Tok::And);
      case '|': return single(Tok::Or);
      case '!': return single(Tok::Not);
      default: break;
    }
    if (!ident_start(c)) fail_at(std::string("unexpected character '") + c + "'", start);
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    std::string word(text_.substr(start, pos_ - start));
    Tok k = word == "exists" ? Tok::Exists : word == "forall" ? Tok::Forall : Tok::Ident;
    tok_ = {k, std::move(word), start};
  }

  void expect(Tok k, const char* what) {
    if (tok_.kind != k) fail(std::string("expected ") + what + ", found '" + tok_.text + "'");
    advance();
  }

  Formula formula() {
    Formula acc = conj();
    while (tok_.kind == Tok::Or) {
      advance();
      acc = Formula::disjunction(acc, conj());
    }
    return acc;
  }

  Formula conj() {
    Formula acc = unary();
    while (tok_.kind == Tok::And) {
      advance();
      acc = Formula::conjunction(acc, unary());
    }
    return acc;
  }

  Formula unary() {
    switch (tok_.kind) {
      case Tok::Not:
        advance();
        return Formula::negation(unary());
      case Tok::Exists:
      case Tok::Forall:
        return quant();
      case Tok::LParen: {
        advance();
        Formula f = formula();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Ident:
        return atom();
      default:
        fail("expected a formula, found '" + tok_.text + "'");
    }
  }

  Variable variable() {
    if (tok_.kind != Tok::Ident) fail("expected a variable, found '" + tok_.text + "'");
    Variable v{tok_.text, ""};
    advance();
    if (tok_.kind == Tok::Colon) {
      advance();
      if (tok_.kind != Tok::Ident) fail("expected a sort name after ':'");
      v.sort = tok_.text;
      advance();
    }
    return v;
  }

  Formula quant() {
    Quantifier q = tok_.kind == Tok::Exists ? Quantifier::Exists : Quantifier::Forall;
    std::size_t at = tok_.offset;
    advance();
    std::vector<Variable> vars;
    while (tok_.kind == Tok::Ident) {
      vars.push_back(variable());
      if (tok_.kind == Tok::Comma) advance();
    }
    if (vars.empty()) fail("quantifier needs at least one variable");
    for (std::size_t i = 0; i < vars.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (vars[i].name == vars[j].name) fail_at("variable '" + vars[i].name + "' repeated in quantifier block", at);
    expect(Tok::Dot, "'.' after quantified variables");
    return Formula::quantified(q, std::move(vars), formula());
  }

  Formula atom() {
    std::string rel = tok_.text;
    advance();
    expect(Tok::LParen, "'(' after relation symbol");
    std::vector<Variable> args;
    args.push_back(variable());
    while (tok_.kind == Tok::Comma) {
      advance();
      args.push_back(variable());
    }
    expect(Tok::RParen, "')' closing atom");
    return Formula::atom(std::move(rel), std::move(args));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token tok_{Tok::End, "", 0};
};

// Assigns each variable name its unique sort.
class SortResolver {
 public:
  explicit SortResolver(const Signature* sig) : sig_(sig) {}

  void collect(const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Atom: {
        const SortWord* arity = nullptr;
        if (sig_) {
          arity = &sig_->arity(f.relation());
          if (arity->size() != f.args().size())
            throw SignatureError("relation '" + f.relation() + "' has arity " + std::to_string(arity->size()) +
                                 " but is applied to " + std::to_string(f.args().size()) + " arguments");
        }
        for (std::size_t i = 0; i < f.args().size(); ++i) {
          const Variable& v = f.args()[i];
          if (!v.sort.empty()) constrain(v.name, v.sort);
          if (arity) constrain(v.name, (*arity)[i]);
        }
        return;
      }
      case Formula::Kind::Quant:
        for (const auto& v : f.bound())
          if (!v.sort.empty()) constrain(v.name, v.sort);
        [[fallthrough]];
      default:
        for (std::size_t i = 0; i < f.child_count(); ++i) collect(f.child_at(i));
    }
  }

  Formula apply(const Formula& f) const {
    switch (f.kind()) {
      case Formula::Kind::Atom: {
        std::vector<Variable> args(f.args().begin(), f.args().end());
        for (auto& v : args) v.sort = sort_of(v.name);
        return Formula::atom(f.relation(), std::move(args));
      }
      case Formula::Kind::Not:
        return Formula::negation(apply(f.child()));
      case Formula::Kind::And:
      case Formula::Kind::Or:
        return Formula::binary(f.kind(), apply(f.left()), apply(f.right()));
      case Formula::Kind::Quant: {
        std::vector<Variable> vars(f.bound().begin(), f.bound().end());
        for (auto& v : vars) v.sort = sort_of(v.name);
        return Formula::quantified(f.quantifier(), std::move(vars), apply(f.child()));
      }
    }
    return f;
  }

 private:
  void constrain(const std::string& name, const std::string& sort) {
    auto [it, inserted] = sorts_.emplace(name, sort);
    if (!inserted && it->second != sort)
      throw SignatureError("variable '" + name + "' used with sorts '" + it->second + "' and '" + sort + "'");
  }

  std::string sort_of(const std::string& name) const {
    auto it = sorts_.find(name);
    return it == sorts_.end() ? std::string(kDefaultSort) : it->second;
  }

  const Signature* sig_;
  std::map<std::string, std::string> sorts_;
};

Formula parse_impl(std::string_view text, const Signature* sig) {
  Formula raw = Parser(text).parse();
  SortResolver resolver(sig);
  resolver.collect(raw);
  Formula f = resolver.apply(raw);
  if (sig) {
    check_against(f, *sig);
  } else {
    infer_signature(f);  // rejects inconsistent arities
  }
  return f;
}

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig) { return parse_impl(text, &sig); }

Formula parse_formula(std::string_view text) { return parse_impl(text, nullptr); }

}  // namespace folio
