#include "horn/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace horn {

namespace {

bool ident_start(char c) { return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)); }
bool var_start(char c) { return std::isupper(static_cast<unsigned char>(c)) || c == '_'; }
bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

const char* tok_name(Tok k) {
  switch (k) {
    case Tok::Ident: return "identifier";
    case Tok::Var: return "variable";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Bar: return "'|'";
    case Tok::Dot: return "'.'";
    case Tok::Neck: return "':-'";
    case Tok::Semi: return "';'";
    case Tok::Equals: return "'='";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::Arrow: return "'->'";
    case Tok::String: return "string";
    case Tok::End: return "end of input";
  }
  return "?";
}

}  // namespace

Lexer::Lexer(std::string_view text) {
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t{Tok::End, {}, line, col};
    if (ident_start(c) || var_start(c)) {
      std::size_t j = i;
      while (j < text.size() && word_char(text[j])) ++j;
      t.kind = var_start(c) ? Tok::Var : Tok::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
      tokens_.push_back(std::move(t));
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') ++j;
      if (j >= text.size() || text[j] != '"') throw ParseError("unterminated string", line, col);
      t.kind = Tok::String;
      t.text = std::string(text.substr(i + 1, j - i - 1));
      advance(j - i + 1);
      tokens_.push_back(std::move(t));
      continue;
    }
    if (c == ':' && i + 1 < text.size() && text[i + 1] == '-') {
      t.kind = Tok::Neck;
      t.text = ":-";
      advance(2);
      tokens_.push_back(std::move(t));
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      t.kind = Tok::Arrow;
      t.text = "->";
      advance(2);
      tokens_.push_back(std::move(t));
      continue;
    }
    switch (c) {
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case '[': t.kind = Tok::LBracket; break;
      case ']': t.kind = Tok::RBracket; break;
      case '{': t.kind = Tok::LBrace; break;
      case '}': t.kind = Tok::RBrace; break;
      case ',': t.kind = Tok::Comma; break;
      case '|': t.kind = Tok::Bar; break;
      case '.': t.kind = Tok::Dot; break;
      case ';': t.kind = Tok::Semi; break;
      case '=': t.kind = Tok::Equals; break;
      case '/': t.kind = Tok::Slash; break;
      case '^': t.kind = Tok::Caret; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    t.text = std::string(1, c);
    advance(1);
    tokens_.push_back(std::move(t));
  }
  tokens_.push_back(Token{Tok::End, {}, line, col});
}

const Token& Lexer::peek(std::size_t ahead) const {
  std::size_t k = std::min(pos_ + ahead, tokens_.size() - 1);
  return tokens_[k];
}

Token Lexer::next() {
  Token t = tokens_[pos_];
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool Lexer::accept(Tok kind) {
  if (peek().kind != kind) return false;
  next();
  return true;
}

Token Lexer::expect(Tok kind, std::string_view what) {
  if (peek().kind != kind) {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    fail_at(t, "expected " + std::string(what.empty() ? tok_name(kind) : what) + ", found " + found);
  }
  return next();
}

void Lexer::fail(const std::string& msg) const { fail_at(peek(), msg); }

void Lexer::fail_at(const Token& t, const std::string& msg) const { throw ParseError(msg, t.line, t.column); }

namespace {

std::vector<Term> parse_arg_list(Lexer& lex) {
  std::vector<Term> args;
  lex.expect(Tok::LParen, "'('");
  args.push_back(parse_term(lex));
  while (lex.accept(Tok::Comma)) args.push_back(parse_term(lex));
  lex.expect(Tok::RParen, "',' or ')'");
  return args;
}

Term parse_list(Lexer& lex) {
  lex.expect(Tok::LBracket, "'['");
  if (lex.accept(Tok::RBracket)) return nil();
  std::vector<Term> items;
  items.push_back(parse_term(lex));
  while (lex.accept(Tok::Comma)) items.push_back(parse_term(lex));
  Term tail = nil();
  if (lex.accept(Tok::Bar)) tail = parse_term(lex);
  lex.expect(Tok::RBracket, "',', '|' or ']'");
  return make_list(std::move(items), std::move(tail));
}

}  // namespace

Term parse_term(Lexer& lex) {
  const Token& t = lex.peek();
  switch (t.kind) {
    case Tok::Var:
      return Term::var(lex.next().text);
    case Tok::LBracket:
      return parse_list(lex);
    case Tok::Ident: {
      std::string name = lex.next().text;
      if (lex.peek().kind == Tok::LParen) return Term::fn(std::move(name), parse_arg_list(lex));
      return Term::fn(std::move(name));
    }
    default:
      lex.fail("expected a term");
  }
}

Atom parse_atom(Lexer& lex) {
  if (lex.peek().kind == Tok::Var) lex.fail("expected an atom, found variable '" + lex.peek().text + "'");
  Token name = lex.expect(Tok::Ident, "a predicate symbol");
  Atom a{name.text, {}};
  if (lex.peek().kind == Tok::LParen) a.args = parse_arg_list(lex);
  return a;
}

Rule parse_rule(Lexer& lex) {
  Atom head = parse_atom(lex);
  std::vector<Atom> body;
  if (lex.accept(Tok::Neck)) {
    body.push_back(parse_atom(lex));
    while (lex.accept(Tok::Comma)) body.push_back(parse_atom(lex));
  }
  lex.expect(Tok::Dot, "'.' at end of rule");
  return Rule(std::move(head), std::move(body));
}

Program parse_rules(Lexer& lex, Tok terminator) {
  Program p;
  while (lex.peek().kind != terminator && lex.peek().kind != Tok::End) p.insert(parse_rule(lex));
  return p;
}

Program parse_program(std::string_view text) {
  Lexer lex(text);
  Program p = parse_rules(lex, Tok::End);
  lex.expect(Tok::End, "end of input");
  return p;
}

Atom parse_atom(std::string_view text) {
  Lexer lex(text);
  Atom a = parse_atom(lex);
  lex.accept(Tok::Dot);
  lex.expect(Tok::End, "end of input");
  return a;
}

std::vector<Atom> parse_goals(std::string_view text) {
  Lexer lex(text);
  std::vector<Atom> goals;
  if (lex.peek().kind == Tok::End) return goals;
  lex.accept(Tok::Neck);
  goals.push_back(parse_atom(lex));
  while (lex.accept(Tok::Comma)) goals.push_back(parse_atom(lex));
  lex.accept(Tok::Dot);
  lex.expect(Tok::End, "end of input");
  return goals;
}

Term parse_term(std::string_view text) {
  Lexer lex(text);
  Term t = parse_term(lex);
  lex.expect(Tok::End, "end of input");
  return t;
}

std::vector<std::string> source_variables(std::string_view text) {
  Lexer lex(text);
  std::vector<std::string> out;
  while (lex.peek().kind != Tok::End) {
    Token t = lex.next();
    if (t.kind == Tok::Var && std::find(out.begin(), out.end(), t.text) == out.end()) out.push_back(t.text);
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program read_program_file(const std::string& path) {
  std::string text = read_text_file(path);
  try {
    return parse_program(text);
  } catch (const ParseError& e) {
    throw ParseError(e.message(), e.line(), e.column(), path);
  }
}

}  // namespace horn
