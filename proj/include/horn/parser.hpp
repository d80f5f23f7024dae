// Reader for `.lp` program text.
//
//   program := (rule ".")*
//   rule    := atom [":-" atom ("," atom)*]
//   atom    := ident | ident "(" term ("," term)* ")"
//   term    := var | ident | ident "(" term ("," term)* ")" | list
//   list    := "[]" | "[" term ("," term)* ["|" term] "]"
//   var     := [A-Z_][A-Za-z0-9_]*      ident := [a-z0-9][A-Za-z0-9_]*
//
// `%` starts a line comment. `[]` is nil and `[H|T]` is cons(H,T).
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "horn/syntax.hpp"

namespace horn {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column, const std::string& source = "")
      : std::runtime_error((source.empty() ? "" : source + ":") + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + msg),
        message_(msg),
        line_(line),
        column_(column) {}

  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

// A file could not be read.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Tok {
  Ident,
  Var,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Comma,
  Bar,
  Dot,
  Neck,  // :-
  Semi,
  Equals,
  Slash,
  Caret,
  Arrow,  // ->
  String,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

// Tokenizer shared by the program, query and form readers.
class Lexer {
 public:
  explicit Lexer(std::string_view text);

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool accept(Tok kind);
  Token expect(Tok kind, std::string_view what);
  [[noreturn]] void fail(const std::string& msg) const;
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// Recursive-descent pieces usable with a shared lexer.
Term parse_term(Lexer& lex);
Atom parse_atom(Lexer& lex);
Rule parse_rule(Lexer& lex);
// Rules up to (not including) the terminator token.
Program parse_rules(Lexer& lex, Tok terminator);

Program parse_program(std::string_view text);
Atom parse_atom(std::string_view text);
// Comma-separated goals; an empty string is the empty query.
std::vector<Atom> parse_goals(std::string_view text);
Term parse_term(std::string_view text);

// Distinct variables in order of first textual occurrence.
std::vector<std::string> source_variables(std::string_view text);

Program read_program_file(const std::string& path);
std::string read_text_file(const std::string& path);

}  // namespace horn
