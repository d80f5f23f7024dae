#include <filesystem>

#include "horn/forms.hpp"
#include "horn/parser.hpp"

namespace horn {

namespace {

class FormReader {
 public:
  FormReader(std::string_view text, std::string base_dir) : lex_(text), base_(std::move(base_dir)) {}

  Lexer& lex() { return lex_; }

  FormDef definition() {
    Token kw = lex_.expect(Tok::Ident, "'form'");
    if (kw.text != "form") lex_.fail_at(kw, "expected 'form', found '" + kw.text + "'");
    FormDef def;
    Token name = lex_.next();
    if (name.kind != Tok::Var && name.kind != Tok::Ident) lex_.fail_at(name, "expected form name");
    def.name = name.text;
    lex_.expect(Tok::LParen, "'('");
    if (lex_.peek().kind != Tok::RParen) {
      def.params.push_back(param());
      while (lex_.accept(Tok::Comma)) def.params.push_back(param());
    }
    lex_.expect(Tok::RParen, "')'");
    lex_.expect(Tok::Equals, "'='");
    def.body = expr();
    lex_.expect(Tok::Semi, "';' after form body");
    return def;
  }

  FormPtr expr() {
    FormPtr f = compose_level();
    while (lex_.accept(Tok::Bar)) f = binary(FormExpr::Kind::Union, f, compose_level());
    return f;
  }

 private:
  FormParam param() {
    FormParam p;
    p.var = lex_.expect(Tok::Var, "program variable").text;
    if (lex_.accept(Tok::LBracket)) {
      p.pred_meta = lex_.expect(Tok::Ident, "predicate placeholder").text;
      lex_.expect(Tok::RBracket, "']'");
    }
    if (lex_.accept(Tok::LParen)) {
      p.tuple_meta = lex_.expect(Tok::Var, "tuple placeholder").text;
      lex_.expect(Tok::RParen, "')'");
    }
    return p;
  }

  bool at_compose_op() const { return lex_.peek().kind == Tok::Ident && lex_.peek().text == "o"; }

  FormPtr compose_level() {
    FormPtr f = concat_level();
    while (at_compose_op()) {
      lex_.next();
      f = binary(FormExpr::Kind::Compose, f, concat_level());
    }
    return f;
  }

  FormPtr concat_level() {
    FormPtr f = postfix();
    while (lex_.accept(Tok::Dot)) f = binary(FormExpr::Kind::Concat, f, postfix());
    return f;
  }

  FormPtr postfix() {
    FormPtr f = primary();
    while (true) {
      if (lex_.accept(Tok::Caret)) {
        f = power_of(f, number());
      } else if (lex_.accept(Tok::LBracket)) {
        std::vector<std::pair<std::string, std::string>> renames;
        do {
          Token from = lex_.next();
          lex_.expect(Tok::Slash, "'/'");
          Token to = lex_.expect(Tok::Ident, "predicate name or 'fresh'");
          if (from.kind == Tok::Var) {
            if (to.text != "fresh") lex_.fail_at(to, "a tuple placeholder can only be renamed to 'fresh'");
            if (!renames.empty()) f = rename_preds(f, std::move(renames));
            renames.clear();
            f = fresh_vars(f, from.text);
          } else if (from.kind == Tok::Ident) {
            renames.emplace_back(from.text, to.text);
          } else {
            lex_.fail_at(from, "expected predicate name");
          }
        } while (lex_.accept(Tok::Comma));
        lex_.expect(Tok::RBracket, "']'");
        if (!renames.empty()) f = rename_preds(f, std::move(renames));
      } else {
        return f;
      }
    }
  }

  std::size_t number() {
    Token t = lex_.expect(Tok::Ident, "number");
    std::size_t n = 0;
    for (char c : t.text) {
      if (c < '0' || c > '9') lex_.fail_at(t, "expected number, found '" + t.text + "'");
      n = n * 10 + static_cast<std::size_t>(c - '0');
    }
    return n;
  }

  FormPtr unary_call(FormExpr::Kind k) {
    lex_.expect(Tok::LParen, "'('");
    FormPtr a = expr();
    lex_.expect(Tok::RParen, "')'");
    return unary(k, a);
  }

  FormPtr primary() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::LParen: {
        lex_.next();
        FormPtr f = expr();
        lex_.expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::LBrace: {
        lex_.next();
        Program p = parse_rules(lex_, Tok::RBrace);
        lex_.expect(Tok::RBrace, "'}'");
        return lit(std::move(p));
      }
      case Tok::Var: {
        Token name = lex_.next();
        if (lex_.peek().kind != Tok::LParen) return var(name.text);
        lex_.next();
        std::vector<FormPtr> args;
        if (lex_.peek().kind != Tok::RParen) {
          args.push_back(expr());
          while (lex_.accept(Tok::Comma)) args.push_back(expr());
        }
        lex_.expect(Tok::RParen, "')'");
        return call(name.text, std::move(args));
      }
      case Tok::Ident: return keyword();
      default: lex_.fail_at(t, "expected a form expression");
    }
  }

  FormPtr keyword() {
    using K = FormExpr::Kind;
    Token t = lex_.next();
    if (t.text == "facts") return unary_call(K::Facts);
    if (t.text == "proper") return unary_call(K::Proper);
    if (t.text == "rev") return unary_call(K::Reverse);
    if (t.text == "body") return unary_call(K::Body);
    if (t.text == "id") return unary_call(K::Identity);
    if (t.text == "empty") return lit(Program{});
    if (t.text == "gnd") {
      lex_.expect(Tok::LParen, "'('");
      FormPtr a = expr();
      lex_.expect(Tok::Comma, "','");
      std::size_t n = number();
      lex_.expect(Tok::RParen, "')'");
      return ground_at(a, n);
    }
    if (t.text == "subst") {
      lex_.expect(Tok::LParen, "'('");
      FormPtr a = expr();
      Substitution s;
      while (lex_.accept(Tok::Comma)) {
        std::string v = lex_.expect(Tok::Var, "variable").text;
        lex_.expect(Tok::Equals, "'='");
        s.bind(v, parse_term(lex_));
      }
      lex_.expect(Tok::RParen, "')'");
      return substitute(a, std::move(s));
    }
    if (t.text == "load") {
      lex_.expect(Tok::LParen, "'('");
      Token path = lex_.expect(Tok::String, "quoted file name");
      lex_.expect(Tok::RParen, "')'");
      std::filesystem::path full = std::filesystem::path(base_) / path.text;
      return lit(read_program_file(full.string()));
    }
    lex_.fail_at(t, "unknown form operator '" + t.text + "'");
  }

  Lexer lex_;
  std::string base_;
};

}  // namespace

FormLibrary parse_forms(std::string_view text, const std::string& base_dir) {
  FormReader reader(text, base_dir);
  FormLibrary lib;
  while (reader.lex().peek().kind != Tok::End) lib.add(reader.definition());
  return lib;
}

FormLibrary read_form_file(const std::string& path) {
  std::string text = read_text_file(path);
  std::string dir = std::filesystem::path(path).parent_path().string();
  try {
    return parse_forms(text, dir.empty() ? "." : dir);
  } catch (const ParseError& e) {
    throw ParseError(e.message(), e.line(), e.column(), path);
  }
}

FormPtr parse_form_expr(std::string_view text, const std::string& base_dir) {
  FormReader reader(text, base_dir);
  FormPtr f = reader.expr();
  reader.lex().expect(Tok::End, "end of form expression");
  return f;
}

}  // namespace horn
