#include "qqm/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <vector>

namespace qqm {

namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  Span span;
  bool glued = false;  // no whitespace before this token
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      bool glued = !skipSpace();
      Span sp{pos_, pos_, line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", sp, glued});
        return out;
      }
      Token t = next(sp);
      t.glued = glued;
      t.span.end = pos_;
      out.push_back(t);
    }
  }

 private:
  bool skipSpace() {
    bool skipped = false;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {  // comment to end of line
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
        skipped = true;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        skipped = true;
      } else {
        break;
      }
    }
    return skipped;
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
        ++col_;
      }
      ++pos_;
    }
  }

  bool startsWith(const char* s) const { return src_.compare(pos_, std::char_traits<char>::length(s), s) == 0; }

  Token sym(const std::string& canonical, std::size_t width, Span sp) {
    advance(width);
    return {Tok::Sym, canonical, sp};
  }

  Token next(Span sp) {
    static const std::vector<std::pair<const char*, const char*>> multi = {
        {"->", "->"}, {"=>", "->"}, {"\xE2\x86\x92", "->"}, {"\xE2\x87\x92", "->"}, {"\xCE\xBB", "\\"}, {"\xC3\x97", "*"}};
    for (const auto& [spelling, canonical] : multi)
      if (startsWith(spelling)) return sym(canonical, std::char_traits<char>::length(spelling), sp);
    char c = src_[pos_];
    bool negNumber = c == '-' && pos_ + 1 < src_.size() &&
                     (std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) || src_[pos_ + 1] == '.');
    if (std::isdigit(static_cast<unsigned char>(c)) || negNumber ||
        (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      const char* begin = src_.c_str() + pos_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      std::size_t width = static_cast<std::size_t>(end - begin);
      if (width == 0) throw SyntaxError("malformed number", sp);
      std::string text(begin, width);
      advance(width);
      Token t{Tok::Number, text, sp};
      t.number = v;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '\''))
        advance(1);
      return {Tok::Ident, src_.substr(start, pos_ - start), sp};
    }
    if (std::string("\\:.()<>,[]*").find(c) != std::string::npos) return sym(std::string(1, c), 1, sp);
    throw SyntaxError(std::string("unexpected character '") + c + "'", sp);
  }

  const std::string& src_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

bool isKeyword(const std::string& s) {
  return s == "let" || s == "be" || s == "in" || s == "fst" || s == "snd" || s == "Real";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Term parseWholeTerm() {
    Term t = term();
    expectEnd();
    return t;
  }

  SimpleType parseWholeType() {
    SimpleType t = type();
    expectEnd();
    return t;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  Token take() { return toks_[std::min(i_++, toks_.size() - 1)]; }
  bool isSym(const char* s, std::size_t k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
  bool isWord(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(what + ", found " + found, t.span);
  }

  void expectSym(const char* s) {
    if (!isSym(s)) fail(std::string("expected '") + s + "'");
    take();
  }

  void expectWord(const char* s) {
    if (!isWord(s)) fail(std::string("expected '") + s + "'");
    take();
  }

  void expectEnd() {
    if (peek().kind != Tok::End) fail("expected end of input");
  }

  std::string ident() {
    if (peek().kind != Tok::Ident || isKeyword(peek().text)) fail("expected an identifier");
    return take().text;
  }

  Span spanFrom(const Span& start) const {
    Span s = start;
    s.end = i_ > 0 ? toks_[i_ - 1].span.end : start.end;
    return s;
  }

  // ---- types
  SimpleType type() {
    SimpleType l = prodType();
    if (isSym("->")) {
      take();
      return SimpleType::arrow(l, type());
    }
    return l;
  }

  SimpleType prodType() {
    SimpleType t = baseType();
    while (isSym("*")) {
      take();
      t = SimpleType::prod(t, baseType());
    }
    return t;
  }

  SimpleType baseType() {
    if (isWord("Real")) {
      take();
      return SimpleType::real();
    }
    if (isSym("(")) {
      take();
      SimpleType t = type();
      expectSym(")");
      return t;
    }
    fail("expected a type");
  }

  // ---- terms
  Term term() {
    Span start = peek().span;
    if (isSym("\\")) {
      take();
      std::string x = ident();
      std::optional<SimpleType> annot;
      if (isSym(":")) {
        take();
        annot = type();
      }
      expectSym(".");
      Term body = term();
      return Term::lam(x, annot, body, spanFrom(start));
    }
    if (isWord("let")) {
      take();
      std::string x = ident();
      std::optional<SimpleType> annot;
      if (isSym(":")) {
        take();
        annot = type();
      }
      expectWord("be");
      Term bound = term();
      expectWord("in");
      Term body = term();
      return Term::let(x, annot, bound, body, spanFrom(start));
    }
    return application();
  }

  bool atomStarts() const {
    const Token& t = peek();
    if (t.kind == Tok::Number) return true;
    if (t.kind == Tok::Ident) return t.text != "let" && t.text != "be" && t.text != "in" && t.text != "Real";
    return t.kind == Tok::Sym && (t.text == "(" || t.text == "<");
  }

  Term application() {
    Span start = peek().span;
    if (!atomStarts()) fail("expected a term");
    Term t = atom();
    while (atomStarts()) {
      Term a = atom();
      t = Term::app(t, a, spanFrom(start));
    }
    return t;
  }

  std::vector<Term> argList() {
    expectSym("(");
    std::vector<Term> args;
    if (!isSym(")")) {
      args.push_back(term());
      while (isSym(",")) {
        take();
        args.push_back(term());
      }
    }
    expectSym(")");
    return args;
  }

  Term atom() {
    Span start = peek().span;
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      take();
      return Term::constant(t.number, spanFrom(start));
    }
    if (t.kind == Tok::Ident && (t.text == "fst" || t.text == "snd")) {
      std::string which = take().text;
      if (!isSym("(")) fail("'" + which + "' needs a parenthesised argument");
      take();
      Term inner = term();
      expectSym(")");
      return which == "fst" ? Term::fst(inner, spanFrom(start)) : Term::snd(inner, spanFrom(start));
    }
    if (t.kind == Tok::Ident) {
      std::string name = ident();
      bool gluedParen = peek().glued && (isSym("(") || isSym("["));
      if (!gluedParen) return Term::var(name, spanFrom(start));
      PrimRef ref{name, std::nullopt};
      if (isSym("[")) {
        take();
        if (peek().kind != Tok::Number) fail("expected a numeric primitive parameter");
        ref.param = take().number;
        expectSym("]");
      }
      auto args = argList();
      return Term::primApp(ref, std::move(args), spanFrom(start));
    }
    if (isSym("(")) {
      take();
      Term inner = term();
      expectSym(")");
      return inner;
    }
    if (isSym("<")) {
      take();
      Term l = term();
      expectSym(",");
      Term r = term();
      expectSym(">");
      return Term::pair(l, r, spanFrom(start));
    }
    fail("expected a term");
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

Term parseTerm(const std::string& source) { return Parser(Lexer(source).run()).parseWholeTerm(); }

SimpleType parseType(const std::string& source) { return Parser(Lexer(source).run()).parseWholeType(); }

}  // namespace qqm
