/*
 * Copyright (C) 2026 The mfgsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#include <mfgsim/dsl.hpp>
#include <mfgsim/error.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace mfgsim::dsl {

//==============================================================================
std::string format(const ParseDiagnostic& d)
{
  std::ostringstream out;
  out << d.span.file << ":" << d.span.line << ":" << d.span.column << ": "
      << to_string(d.severity) << ": " << d.message;
  return out.str();
}

//==============================================================================
bool is_reserved_word(std::string_view word)
{
  static const std::set<std::string_view> reserved = {
    "and", "or", "not", "true", "false", "has", "sort_at_most", "ref", "extern",
  };
  return reserved.count(word) > 0;
}

namespace {

enum class Tok
{
  Ident,
  Number,
  String,
  Punct,
  End,
};

struct Token
{
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

struct SyntaxError
{
  SourceSpan span;
  std::string message;
};

std::string describe(const Token& t)
{
  switch (t.kind)
  {
    case Tok::End: return "end of input";
    case Tok::String: return "string literal";
    case Tok::Number: return "number '" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

//==============================================================================
class Lexer
{
public:
  Lexer(std::string_view text, std::string file)
  : _text(text),
    _file(std::move(file))
  {
  }

  std::vector<Token> run()
  {
    std::vector<Token> tokens;
    while (true)
    {
      skip_space_and_comments();
      if (_pos >= _text.size())
      {
        tokens.push_back(Token{Tok::End, "", span_here(0)});
        return tokens;
      }
      tokens.push_back(next_token());
    }
  }

private:
  SourceSpan span_here(std::size_t length) const
  {
    return SourceSpan{_file, _line, _column, length, _pos};
  }

  void advance()
  {
    if (_text[_pos] == '\n')
    {
      ++_line;
      _column = 1;
    }
    else
    {
      ++_column;
    }
    ++_pos;
  }

  void skip_space_and_comments()
  {
    while (_pos < _text.size())
    {
      const char c = _text[_pos];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
      {
        advance();
      }
      else if (c == '/' && _pos + 1 < _text.size() && _text[_pos + 1] == '/')
      {
        while (_pos < _text.size() && _text[_pos] != '\n')
          advance();
      }
      else
      {
        return;
      }
    }
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_alpha(char c)
  {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }

  Token next_token()
  {
    const std::size_t start = _pos;
    SourceSpan span = span_here(0);
    const char c = _text[_pos];

    const auto finish = [&](Tok kind, std::string text)
    {
      span.length = _pos - start;
      return Token{kind, std::move(text), span};
    };

    if (is_alpha(c))
    {
      while (_pos < _text.size()
        && (is_alpha(_text[_pos]) || is_digit(_text[_pos]) || _text[_pos] == '-'))
      {
        advance();
      }
      return finish(Tok::Ident, std::string(_text.substr(start, _pos - start)));
    }

    if (is_digit(c))
    {
      while (_pos < _text.size() && is_digit(_text[_pos]))
        advance();
      if (_pos + 1 < _text.size() && _text[_pos] == '.' && is_digit(_text[_pos + 1]))
      {
        advance();
        while (_pos < _text.size() && is_digit(_text[_pos]))
          advance();
      }
      if (_pos < _text.size() && (_text[_pos] == 'e' || _text[_pos] == 'E'))
      {
        std::size_t look = _pos + 1;
        if (look < _text.size() && (_text[look] == '+' || _text[look] == '-'))
          ++look;
        if (look < _text.size() && is_digit(_text[look]))
        {
          while (_pos < look)
            advance();
          while (_pos < _text.size() && is_digit(_text[_pos]))
            advance();
        }
      }
      return finish(Tok::Number, std::string(_text.substr(start, _pos - start)));
    }

    if (c == '"')
      return lex_string(start, span);

    static const char* puncts[] = {
      "::", "->", "<-", "=>", "<=", ">=", "!=",
      "{", "}", "(", ")", "[", "]", ";", ":", ",", ".", "<", ">", "=", "+",
      "-", "*", "/",
    };
    for (const char* p : puncts)
    {
      const std::string_view pv(p);
      if (_text.substr(_pos, pv.size()) == pv)
      {
        for (std::size_t i = 0; i < pv.size(); ++i)
          advance();
        return finish(Tok::Punct, std::string(pv));
      }
    }

    span.length = 1;
    throw SyntaxError{span, "unexpected character '" + std::string(1, c) + "'"};
  }

  Token lex_string(std::size_t start, SourceSpan span)
  {
    advance();
    std::string value;
    while (true)
    {
      if (_pos >= _text.size() || _text[_pos] == '\n')
      {
        span.length = _pos - start;
        throw SyntaxError{span, "unterminated string literal"};
      }
      const char c = _text[_pos];
      if (c == '"')
      {
        advance();
        break;
      }
      if (c == '\\')
      {
        if (_pos + 1 >= _text.size())
        {
          span.length = _pos - start;
          throw SyntaxError{span, "unterminated string literal"};
        }
        const char e = _text[_pos + 1];
        switch (e)
        {
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          default:
          {
            SourceSpan bad = span_here(2);
            throw SyntaxError{bad, "unknown escape sequence"};
          }
        }
        advance();
        advance();
        continue;
      }
      value += c;
      advance();
    }
    span.length = _pos - start;
    return Token{Tok::String, std::move(value), span};
  }

  std::string_view _text;
  std::string _file;
  std::size_t _pos = 0;
  std::size_t _line = 1;
  std::size_t _column = 1;
};

//==============================================================================
/// State shared by the parsers of a root file and everything it includes.
struct LoadState
{
  Workspace workspace;
  std::vector<ParseDiagnostic> diagnostics;
  std::vector<std::function<void()>> deferred;
  std::vector<std::filesystem::path> include_stack;
  std::set<std::filesystem::path> included;

  struct AlphabetEntry
  {
    std::string symbol;
    std::set<SortRef> sorts;
    SourceSpan span;
  };
  std::vector<AlphabetEntry> alphabet;

  void error(const SourceSpan& span, std::string message)
  {
    diagnostics.push_back(ParseDiagnostic{span, Severity::Error, std::move(message)});
  }
};

struct Name
{
  std::string text;
  SourceSpan span;
};

//==============================================================================
class Parser
{
public:
  Parser(LoadState& state, std::vector<Token> tokens, std::filesystem::path base_dir)
  : _st(state),
    _tokens(std::move(tokens)),
    _base_dir(std::move(base_dir))
  {
  }

  /// Parses items until end of input. Returns false after a syntax error.
  bool run()
  {
    try
    {
      while (peek().kind != Tok::End)
        item();
      return true;
    }
    catch (const SyntaxError& e)
    {
      _st.error(e.span, e.message);
      return false;
    }
  }

private:
  //----------------------------------------------------------------------------
  const Token& peek(std::size_t k = 0) const
  {
    const std::size_t i = std::min(_pos + k, _tokens.size() - 1);
    return _tokens[i];
  }

  Token next()
  {
    Token t = peek();
    if (_pos < _tokens.size() - 1)
      ++_pos;
    return t;
  }

  [[noreturn]] void fail(const Token& t, const std::string& expected) const
  {
    throw SyntaxError{t.span, "expected " + expected + ", found " + describe(t)};
  }

  bool is_punct(const char* p, std::size_t k = 0) const
  {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }

  bool is_word(const char* w, std::size_t k = 0) const
  {
    return peek(k).kind == Tok::Ident && peek(k).text == w;
  }

  bool accept_punct(const char* p)
  {
    if (!is_punct(p))
      return false;
    next();
    return true;
  }

  bool accept_word(const char* w)
  {
    if (!is_word(w))
      return false;
    next();
    return true;
  }

  void expect_punct(const char* p)
  {
    if (!accept_punct(p))
      fail(peek(), std::string("'") + p + "'");
  }

  void expect_word(const char* w)
  {
    if (!accept_word(w))
      fail(peek(), std::string("'") + w + "'");
  }

  Name name(const char* what)
  {
    const Token& t = peek();
    if (t.kind != Tok::Ident)
      fail(t, what);
    if (is_reserved_word(t.text))
      throw SyntaxError{t.span, "'" + t.text + "' is a reserved word and cannot be used as " + what};
    Token tok = next();
    return Name{tok.text, tok.span};
  }

  std::string string_literal(const char* what)
  {
    if (peek().kind != Tok::String)
      fail(peek(), what);
    return next().text;
  }

  template<typename Int>
  Int integer(const char* what)
  {
    const Token& t = peek();
    Int value{};
    if (t.kind == Tok::Number)
    {
      const auto [ptr, ec] = std::from_chars(
        t.text.data(), t.text.data() + t.text.size(), value);
      if (ec == std::errc() && ptr == t.text.data() + t.text.size())
      {
        next();
        return value;
      }
    }
    fail(t, what);
  }

  sim::SimTime duration()
  {
    const Token& number = peek();
    const Token& unit = peek(1);
    if (number.kind == Tok::Number && unit.kind == Tok::Ident)
    {
      const auto parsed = sim::parse_duration(number.text + unit.text);
      if (parsed)
      {
        next();
        next();
        return *parsed;
      }
    }
    fail(number, "duration (integer followed by us, ms, s, m or h)");
  }

  SortRef sort_ref(const std::string& context_set)
  {
    Name first = name("sort name");
    if (accept_punct("::"))
    {
      Name second = name("sort name");
      return SortRef{first.text, second.text};
    }
    return SortRef{context_set, first.text};
  }

  //----------------------------------------------------------------------------
  void item()
  {
    const Token& t = peek();
    if (t.kind != Tok::Ident)
      fail(t, "a top-level declaration");

    if (t.text == "include") return include();
    if (t.text == "sortset") return sortset();
    if (t.text == "rank") return rank();
    if (t.text == "alphabet") return alphabet();
    if (t.text == "ontology") return ontology();
    if (t.text == "model") return model();
    if (t.text == "abstractmap") return sort_map(MapDirection::Abstracting);
    if (t.text == "refinemap") return sort_map(MapDirection::Refining);
    if (t.text == "expansion") return expansion();
    if (t.text == "modemapping") return mode_mapping();
    if (t.text == "scenario") return scenario();
    fail(t, "a top-level declaration");
  }

  //----------------------------------------------------------------------------
  void include()
  {
    const Token kw = next();
    const Token path_tok = peek();
    const std::string rel = string_literal("include path string");
    expect_punct(";");

    std::filesystem::path path = std::filesystem::path(rel);
    if (path.is_relative())
      path = _base_dir / path;
    std::error_code ec;
    const auto canonical = std::filesystem::weakly_canonical(path, ec);
    if (!ec)
      path = canonical;

    for (const auto& open : _st.include_stack)
    {
      if (open == path)
      {
        _st.error(path_tok.span, "include cycle through '" + rel + "'");
        return;
      }
    }
    if (_st.included.count(path) > 0)
      return;

    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
      _st.error(path_tok.span, "cannot read included file '" + rel + "'");
      return;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    _st.included.insert(path);
    _st.include_stack.push_back(path);
    try
    {
      Parser child(_st, Lexer(text, path.string()).run(), path.parent_path());
      child.run();
    }
    catch (const SyntaxError& e)
    {
      _st.error(e.span, e.message);
    }
    _st.include_stack.pop_back();
    (void)kw;
  }

  //----------------------------------------------------------------------------
  void sortset()
  {
    next();
    const Name set_name = name("sort set name");
    expect_punct("{");

    struct Decl
    {
      Name sort;
      std::vector<Name> supers;
    };
    std::vector<Decl> decls;
    while (!accept_punct("}"))
    {
      expect_word("sort");
      Decl d{name("sort name"), {}};
      if (accept_punct("<"))
      {
        do
          d.supers.push_back(name("supersort name"));
        while (accept_punct(","));
      }
      expect_punct(";");
      decls.push_back(std::move(d));
    }

    if (_st.workspace.sorts.has_sort_set(set_name.text))
    {
      _st.error(set_name.span, "sort set '" + set_name.text + "' is already declared");
      return;
    }
    SortSet& set = _st.workspace.sorts.declare_sort_set(set_name.text);
    for (const auto& d : decls)
    {
      if (set.contains(d.sort.text))
        _st.error(d.sort.span, "sort '" + d.sort.text + "' declared twice");
      set.add_sort(d.sort.text);
    }
    for (const auto& d : decls)
    {
      for (const auto& super : d.supers)
      {
        try
        {
          set.declare_subsort(d.sort.text, super.text);
        }
        catch (const Error& e)
        {
          _st.error(super.span, e.what());
        }
      }
    }
  }

  //----------------------------------------------------------------------------
  void rank()
  {
    next();
    const Name below = name("sort set name");
    expect_punct("<");
    const Name above = name("sort set name");
    expect_punct(";");

    _st.deferred.push_back([&st = _st, below, above]
      {
        try
        {
          st.workspace.sorts.rank_sort_sets(below.text, above.text);
        }
        catch (const Error& e)
        {
          st.error(below.span, e.what());
        }
      });
  }

  //----------------------------------------------------------------------------
  void alphabet()
  {
    next();
    expect_punct("{");
    while (!accept_punct("}"))
    {
      expect_word("symbol");
      const Name symbol = name("symbol name");
      expect_punct(":");
      std::set<SortRef> sorts;
      do
      {
        const Name set = name("sort set name");
        expect_punct("::");
        const Name sort = name("sort name");
        sorts.insert(SortRef{set.text, sort.text});
      }
      while (accept_punct(","));
      expect_punct(";");
      _st.alphabet.push_back({symbol.text, std::move(sorts), symbol.span});
    }
  }

  //----------------------------------------------------------------------------
  Name in_sort_set()
  {
    expect_word("in");
    Name set = name("sort set name");
    _st.deferred.push_back([&st = _st, set]
      {
        if (!st.workspace.sorts.has_sort_set(set.text))
          st.error(set.span, "unknown sort set '" + set.text + "'");
      });
    return set;
  }

  //----------------------------------------------------------------------------
  Rule rule(const std::string& context_set, std::size_t index)
  {
    expect_word("rule");
    Rule r;
    if (peek().kind == Tok::Ident && is_punct(":", 1))
    {
      r.id = name("rule id").text;
      next();
    }
    else
    {
      r.id = "r" + std::to_string(index);
    }
    r.expr = expression(context_set);
    expect_punct(";");
    return r;
  }

  //----------------------------------------------------------------------------
  void ontology()
  {
    next();
    const Name onto_name = name("ontology name");
    const Name set = in_sort_set();
    expect_punct("{");

    Ontology onto;
    onto.name = onto_name.text;
    onto.sort_set = set.text;

    while (!accept_punct("}"))
    {
      if (accept_word("provenance"))
      {
        onto.provenance = string_literal("provenance string");
        expect_punct(";");
        continue;
      }

      expect_word("commitment");
      Commitment c;
      c.id = name("commitment id").text;
      expect_word("on");
      c.applies_to = sort_ref(set.text);
      expect_punct("{");
      while (!accept_punct("}"))
      {
        if (is_word("require") || is_word("optional"))
        {
          RequiredAttribute req;
          req.required = next().text == "require";
          if (accept_punct("*"))
            req.name = RequiredAttribute::any;
          else
            req.name = name("attribute name").text;
          req.ref_only = accept_word("ref");
          expect_punct(":");
          req.sort = sort_ref(set.text);
          expect_punct(";");
          c.required_attributes.push_back(std::move(req));
        }
        else if (is_word("rule"))
        {
          c.rules.push_back(rule(set.text, c.rules.size() + 1));
        }
        else if (accept_word("rationale"))
        {
          c.rationale = string_literal("rationale string");
          expect_punct(";");
        }
        else
        {
          fail(peek(), "'require', 'optional', 'rule' or 'rationale'");
        }
      }
      onto.commitments.push_back(std::move(c));
    }

    if (_st.workspace.ontologies.count(onto.name) > 0)
    {
      _st.error(onto_name.span, "ontology '" + onto.name + "' is already defined");
      return;
    }
    _st.workspace.ontologies.emplace(onto.name, onto);
    _st.deferred.push_back([&st = _st, onto_name]
      {
        const Ontology& o = st.workspace.ontologies.at(onto_name.text);
        if (!st.workspace.sorts.has_sort_set(o.sort_set))
          return;
        for (const auto& d : validate_ontology(o, st.workspace.sorts).diagnostics)
          st.error(onto_name.span, d.path.empty() ? d.message : d.path + ": " + d.message);
      });
  }

  //----------------------------------------------------------------------------
  Value value()
  {
    const Token& t = peek();
    if (t.kind == Tok::Number || (is_punct("-") && peek(1).kind == Tok::Number))
      return Value(number_literal());
    if (t.kind == Tok::String)
      return Value(next().text);
    if (accept_word("true"))
      return Value(true);
    if (accept_word("false"))
      return Value(false);
    if (accept_word("ref"))
      return Value(EntityRef{name("entity name").text, false});
    if (accept_word("extern"))
      return Value(EntityRef{name("entity name").text, true});
    if (accept_punct("["))
    {
      ValueList list;
      if (!accept_punct("]"))
      {
        do
          list.push_back(value());
        while (accept_punct(","));
        expect_punct("]");
      }
      return Value(std::move(list));
    }
    fail(t, "a value");
  }

  Number number_literal()
  {
    const bool negative = accept_punct("-");
    const Token tok = next();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(
      tok.text.data(), tok.text.data() + tok.text.size(), v);
    if (ec != std::errc() || ptr != tok.text.data() + tok.text.size())
      throw SyntaxError{tok.span, "number '" + tok.text + "' is out of range"};

    Number n{negative ? -v : v, Unit::None};
    if (is_word("m") && is_punct("/", 1) && is_word("s", 2))
    {
      next();
      next();
      next();
      n.unit = Unit::MetrePerSecond;
    }
    else if (accept_word("m"))
    {
      n.unit = Unit::Metre;
    }
    else if (accept_word("s"))
    {
      n.unit = Unit::Second;
    }
    else if (accept_word("count"))
    {
      n.unit = Unit::Count;
    }
    return n;
  }

  //----------------------------------------------------------------------------
  Expr expression(const std::string& set) { return or_expr(set); }

  Expr or_expr(const std::string& set)
  {
    Expr lhs = and_expr(set);
    while (accept_word("or"))
      lhs = Expr::binary(ExprOp::Or, std::move(lhs), and_expr(set));
    return lhs;
  }

  Expr and_expr(const std::string& set)
  {
    Expr lhs = not_expr(set);
    while (accept_word("and"))
      lhs = Expr::binary(ExprOp::And, std::move(lhs), not_expr(set));
    return lhs;
  }

  Expr not_expr(const std::string& set)
  {
    if (accept_word("not"))
      return Expr::unary(ExprOp::Not, not_expr(set));
    return comparison(set);
  }

  Expr comparison(const std::string& set)
  {
    Expr lhs = additive(set);
    static const std::pair<const char*, ExprOp> ops[] = {
      {"=", ExprOp::Eq}, {"!=", ExprOp::Ne}, {"<=", ExprOp::Le},
      {">=", ExprOp::Ge}, {"<", ExprOp::Lt}, {">", ExprOp::Gt},
    };
    for (const auto& [p, op] : ops)
    {
      if (accept_punct(p))
        return Expr::binary(op, std::move(lhs), additive(set));
    }
    return lhs;
  }

  Expr additive(const std::string& set)
  {
    Expr lhs = multiplicative(set);
    while (true)
    {
      if (accept_punct("+"))
        lhs = Expr::binary(ExprOp::Add, std::move(lhs), multiplicative(set));
      else if (accept_punct("-"))
        lhs = Expr::binary(ExprOp::Sub, std::move(lhs), multiplicative(set));
      else
        return lhs;
    }
  }

  Expr multiplicative(const std::string& set)
  {
    Expr lhs = unary(set);
    while (true)
    {
      if (accept_punct("*"))
        lhs = Expr::binary(ExprOp::Mul, std::move(lhs), unary(set));
      else if (accept_punct("/"))
        lhs = Expr::binary(ExprOp::Div, std::move(lhs), unary(set));
      else
        return lhs;
    }
  }

  Expr unary(const std::string& set)
  {
    if (is_punct("-") && peek(1).kind == Tok::Number)
      return Expr::lit(Value(number_literal()));
    if (accept_punct("-"))
      return Expr::unary(ExprOp::Negate, unary(set));
    return primary(set);
  }

  Expr primary(const std::string& set)
  {
    const Token& t = peek();
    if (accept_punct("("))
    {
      Expr inner = expression(set);
      expect_punct(")");
      return inner;
    }
    if (t.kind == Tok::Number || t.kind == Tok::String || is_punct("[")
      || is_word("true") || is_word("false") || is_word("ref") || is_word("extern"))
    {
      return Expr::lit(value());
    }
    if (accept_word("has"))
    {
      expect_punct("(");
      Expr e = Expr::has(name("attribute name").text);
      expect_punct(")");
      return e;
    }
    if (accept_word("sort_at_most"))
    {
      expect_punct("(");
      std::string attr = name("attribute name").text;
      expect_punct(",");
      SortRef sort = sort_ref(set);
      expect_punct(")");
      return Expr::sort_at_most(std::move(attr), std::move(sort));
    }
    if (t.kind == Tok::Ident)
      return Expr::attr(name("attribute name").text);
    fail(t, "an expression");
  }

  //----------------------------------------------------------------------------
  Attribute attribute(const std::string& set)
  {
    expect_word("attr");
    Attribute a;
    a.name = name("attribute name").text;
    expect_punct(":");
    a.sort = sort_ref(set);
    expect_punct("=");
    a.value = value();
    expect_punct(";");
    return a;
  }

  //----------------------------------------------------------------------------
  void model()
  {
    next();
    const Name model_name = name("model name");
    const Name set = in_sort_set();
    expect_punct("{");

    InformationModel m(model_name.text, set.text);
    while (!accept_punct("}"))
    {
      expect_word("entity");
      const Name entity_name = name("entity name");
      EntitySpec e;
      e.name = entity_name.text;
      expect_punct(":");
      do
        e.result_sort.push_back(sort_ref(set.text));
      while (accept_punct(","));

      if (accept_word("kind"))
      {
        const Token k = peek();
        const auto kind = entity_kind_from_string(k.text);
        if (k.kind != Tok::Ident || !kind)
          fail(k, "'object', 'operation', 'situation' or 'process'");
        next();
        e.kind = *kind;
      }

      expect_punct("{");
      while (!accept_punct("}"))
      {
        if (is_word("attr"))
        {
          e.attributes.push_back(attribute(set.text));
        }
        else if (is_word("functor"))
        {
          const Token kw = next();
          const Token m_tok = peek();
          const auto mode = functor_mode_from_string(m_tok.text);
          if (m_tok.kind != Tok::Ident || !mode)
            fail(m_tok, "functor mode (aggregate, compose, derive or identity)");
          next();
          if (e.functor)
            throw SyntaxError{kw.span, "entity '" + e.name + "' has two functors"};

          Functor f{*mode, {}};
          expect_punct("{");
          while (!accept_punct("}"))
          {
            expect_word("fn");
            FunctorFunction fn;
            fn.name = name("function name").text;
            expect_punct("(");
            if (!accept_punct(")"))
            {
              do
                fn.domain_attrs.push_back(name("attribute name").text);
              while (accept_punct(","));
              expect_punct(")");
            }
            expect_punct("->");
            fn.codomain = sort_ref(set.text);
            if (accept_punct("="))
              fn.body = expression(set.text);
            expect_punct(";");
            f.functions.push_back(std::move(fn));
          }
          e.functor = std::move(f);
        }
        else if (is_word("rule"))
        {
          e.rules.push_back(rule(set.text, e.rules.size() + 1));
        }
        else
        {
          fail(peek(), "'attr', 'functor', 'rule' or '}'");
        }
      }

      try
      {
        m.define_entity(std::move(e));
      }
      catch (const Error& err)
      {
        _st.error(entity_name.span, err.what());
      }
    }

    if (_st.workspace.models.count(m.name()) > 0)
    {
      _st.error(model_name.span, "model '" + m.name() + "' is already defined");
      return;
    }
    _st.workspace.models.emplace(m.name(), std::move(m));
  }

  //----------------------------------------------------------------------------
  void sort_map(MapDirection direction)
  {
    next();
    const Name map_name = name("map name");
    const Name set = in_sort_set();
    expect_punct("{");

    SortMap map;
    map.name = map_name.text;
    map.sort_set = set.text;
    map.direction = direction;

    std::vector<SourceSpan> spans;
    while (!accept_punct("}"))
    {
      SortMapEntry entry;
      const Name from = name("sort name");
      entry.from = from.text;
      expect_punct("->");
      entry.to = name("sort name").text;
      if (accept_word("as"))
        entry.target_attribute = name("attribute name").text;
      if (accept_word("aggregate"))
        entry.merge = FunctorMode::Aggregate;
      else if (accept_word("compose"))
        entry.merge = FunctorMode::Compose;
      expect_punct(";");
      map.entries.push_back(std::move(entry));
      spans.push_back(from.span);
    }

    if (_st.workspace.sort_maps.count(map.name) > 0)
    {
      _st.error(map_name.span, "map '" + map.name + "' is already defined");
      return;
    }
    _st.workspace.sort_maps.emplace(map.name, map);

    _st.deferred.push_back([&st = _st, map, spans]
      {
        if (!st.workspace.sorts.has_sort_set(map.sort_set))
          return;
        const SortSet& s = st.workspace.sorts.sort_set(map.sort_set);
        std::set<std::string> seen;
        for (std::size_t i = 0; i < map.entries.size(); ++i)
        {
          const auto& e = map.entries[i];
          if (!seen.insert(e.from).second)
          {
            st.error(spans[i], "sort '" + e.from + "' mapped twice");
            continue;
          }
          if (!s.contains(e.from) || !s.contains(e.to))
          {
            st.error(spans[i], "map entry " + e.from + " -> " + e.to
              + " names a sort not in '" + map.sort_set + "'");
            continue;
          }
          const bool ok = map.direction == MapDirection::Abstracting
            ? s.is_subsort(e.from, e.to) : s.is_subsort(e.to, e.from);
          if (!ok)
          {
            st.error(spans[i], std::string("map entry ") + e.from + " -> " + e.to
              + (map.direction == MapDirection::Abstracting
                  ? " does not go up the subsort order"
                  : " does not go down the subsort order"));
          }
        }
      });
  }

  //----------------------------------------------------------------------------
  AttributePath attribute_path()
  {
    AttributePath p;
    p.entity = name("entity name").text;
    expect_punct(".");
    p.attribute = name("attribute name").text;
    return p;
  }

  void expansion()
  {
    next();
    const Name x_name = name("expansion name");
    const Name set = in_sort_set();
    expect_punct("{");

    Expansion x;
    x.name = x_name.text;
    x.sort_set = set.text;
    while (!accept_punct("}"))
    {
      AttributeExpansion entry;
      const AttributePath p = attribute_path();
      entry.entity = p.entity;
      entry.attribute = p.attribute;
      expect_punct("=>");
      expect_punct("{");
      while (!accept_punct("}"))
        entry.replacements.push_back(attribute(set.text));
      x.entries.push_back(std::move(entry));
    }

    if (_st.workspace.expansions.count(x.name) > 0)
    {
      _st.error(x_name.span, "expansion '" + x.name + "' is already defined");
      return;
    }
    _st.workspace.expansions.emplace(x.name, std::move(x));
  }

  //----------------------------------------------------------------------------
  void mode_mapping()
  {
    next();
    const Name mm_name = name("mode mapping name");
    expect_punct("{");

    ModeMapping mm;
    mm.name = mm_name.text;
    while (!accept_punct("}"))
    {
      ModeMappingEntry entry;
      entry.abstract_path = attribute_path();
      expect_punct("<-");
      do
        entry.detailed_paths.push_back(attribute_path());
      while (accept_punct(","));
      if (peek().kind == Tok::Ident && is_punct(";", 1))
      {
        const Token m = next();
        entry.mode = functor_mode_from_string(m.text);
        if (!entry.mode)
          fail(m, "mapping mode (aggregate, compose, derive or identity)");
      }
      expect_punct(";");
      mm.entries.push_back(std::move(entry));
    }

    if (_st.workspace.mode_mappings.count(mm.name) > 0)
    {
      _st.error(mm_name.span, "mode mapping '" + mm.name + "' is already defined");
      return;
    }
    _st.workspace.mode_mappings.emplace(mm.name, std::move(mm));
  }

  //----------------------------------------------------------------------------
  void scenario()
  {
    next();
    const Name sc_name = name("scenario name");
    expect_punct("{");

    ScenarioConfig sc;
    sc.name = sc_name.text;
    std::vector<Name> model_refs;

    while (!accept_punct("}"))
    {
      const Token kw = peek();
      if (kw.kind != Tok::Ident)
        fail(kw, "a scenario setting");

      if (accept_word("plant"))
      {
        const Name n = name("model name");
        sc.plant_model = n.text;
        model_refs.push_back(n);
      }
      else if (accept_word("abstract"))
      {
        const Name n = name("model name");
        sc.abstract_model = n.text;
        model_refs.push_back(n);
      }
      else if (accept_word("detailed"))
      {
        const Name n = name("model name");
        sc.detailed_model = n.text;
        model_refs.push_back(n);
      }
      else if (accept_word("mode"))
      {
        const Token m = peek();
        const auto mode = transfer_mode_from_string(m.text);
        if (m.kind != Tok::Ident || !mode)
          fail(m, "'abstract' or 'detailed'");
        next();
        sc.mode = *mode;
      }
      else if (accept_word("horizon"))
      {
        sc.horizon = duration();
      }
      else if (accept_word("seed"))
      {
        sc.seed = integer<std::uint64_t>("seed (non-negative integer)");
      }
      else if (accept_word("fleet"))
      {
        sc.fleet = integer<std::int64_t>("fleet size (integer)");
      }
      else if (accept_word("release"))
      {
        ReleaseSchedule r;
        r.unit = name("unit entity name").text;
        if (accept_word("every"))
        {
          r.kind = ReleaseKind::Every;
          r.interval = duration();
          if (accept_word("offset"))
            r.offset = duration();
        }
        else if (accept_word("exponential"))
        {
          r.kind = ReleaseKind::Exponential;
          r.interval = duration();
          if (accept_word("offset"))
            r.offset = duration();
        }
        else if (accept_word("batch"))
        {
          r.kind = ReleaseKind::Batch;
          r.count = integer<std::int64_t>("batch size (integer)");
          expect_word("at");
          r.offset = duration();
        }
        else
        {
          fail(peek(), "'every', 'exponential' or 'batch'");
        }
        sc.releases.push_back(std::move(r));
      }
      else if (accept_word("route"))
      {
        RoutingEntry r;
        r.from = name("unit entity name").text;
        expect_punct("->");
        r.to = name("unit entity name").text;
        sc.routes.push_back(std::move(r));
      }
      else if (accept_word("needs"))
      {
        AssemblyNeed n;
        n.assembly = name("assembly entity name").text;
        expect_word("from");
        n.source = name("unit entity name").text;
        n.count = integer<std::int64_t>("part count (integer)");
        sc.needs.push_back(std::move(n));
      }
      else if (accept_word("retrieve"))
      {
        RetrievalSchedule r;
        r.unit = name("warehouse entity name").text;
        expect_word("every");
        r.interval = duration();
        sc.retrievals.push_back(std::move(r));
      }
      else
      {
        fail(kw, "a scenario setting");
      }
      expect_punct(";");
    }

    if (_st.workspace.scenarios.count(sc.name) > 0)
    {
      _st.error(sc_name.span, "scenario '" + sc.name + "' is already defined");
      return;
    }
    _st.workspace.scenarios.emplace(sc.name, std::move(sc));

    _st.deferred.push_back([&st = _st, model_refs]
      {
        for (const auto& n : model_refs)
        {
          if (st.workspace.models.count(n.text) == 0)
            st.error(n.span, "scenario names unknown model '" + n.text + "'");
        }
      });
  }

  LoadState& _st;
  std::vector<Token> _tokens;
  std::size_t _pos = 0;
  std::filesystem::path _base_dir;
};

//==============================================================================
ParseResult finish(LoadState& st)
{
  for (const auto& check : st.deferred)
    check();

  for (const auto& entry : st.alphabet)
  {
    try
    {
      st.workspace.alphabet.assign_symbol_sorts(
        st.workspace.sorts, entry.symbol, entry.sorts);
    }
    catch (const Error& e)
    {
      st.error(entry.span, e.what());
    }
  }

  ParseResult result;
  result.diagnostics = std::move(st.diagnostics);

  bool has_error = false;
  for (const auto& d : result.diagnostics)
    has_error = has_error || d.severity == Severity::Error;
  if (has_error)
    return result;

  for (const auto& [name, model] : st.workspace.models)
  {
    result.model_reports[name] =
      check_wellformed(model, st.workspace.sorts, st.workspace.alphabet);
  }
  result.workspace = std::move(st.workspace);
  return result;
}

} // anonymous namespace

//==============================================================================
ParseResult parse(std::string_view text, const ParseOptions& options)
{
  LoadState st;
  std::filesystem::path base = options.base_dir;
  if (base.empty())
    base = std::filesystem::current_path();

  try
  {
    Parser parser(st, Lexer(text, options.filename).run(), base);
    parser.run();
  }
  catch (const SyntaxError& e)
  {
    st.error(e.span, e.message);
  }
  return finish(st);
}

//==============================================================================
ParseResult parse_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    ParseResult result;
    result.diagnostics.push_back(ParseDiagnostic{
      SourceSpan{path.string(), 1, 1, 0, 0}, Severity::Error,
      "cannot read file '" + path.string() + "'"});
    return result;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  LoadState st;
  std::error_code ec;
  auto canonical = std::filesystem::weakly_canonical(path, ec);
  if (ec)
    canonical = path;
  st.included.insert(canonical);
  st.include_stack.push_back(canonical);

  try
  {
    Parser parser(st, Lexer(text, path.string()).run(), canonical.parent_path());
    parser.run();
  }
  catch (const SyntaxError& e)
  {
    st.error(e.span, e.message);
  }
  return finish(st);
}

} // namespace mfgsim::dsl
