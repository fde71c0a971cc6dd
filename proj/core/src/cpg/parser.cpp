#include "deltamsg/cpg/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <tuple>
#include <utility>

#include "deltamsg/errors.hpp"

namespace deltamsg::cpg {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Ident, Int, Str, Char, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool ident_part(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      Token t;
      t.line = line_;
      t.column = column_;
      if (pos_ >= text_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (ident_start(c)) {
        t.kind = Tok::Ident;
        while (pos_ < text_.size() && ident_part(text_[pos_])) t.text.push_back(advance());
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Int;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                text_[pos_] == '_')) {
          t.text.push_back(advance());
        }
      } else if (c == '"' || c == '\'') {
        t.kind = c == '"' ? Tok::Str : Tok::Char;
        t.text.push_back(advance());
        for (;;) {
          if (pos_ >= text_.size() || text_[pos_] == '\n') {
            throw SyntaxError(t.line, t.column, t.text, "unterminated literal");
          }
          char d = advance();
          t.text.push_back(d);
          if (d == '\\' && pos_ < text_.size()) {
            t.text.push_back(advance());
          } else if (d == c) {
            break;
          }
        }
      } else {
        t.kind = Tok::Punct;
        static constexpr std::array<std::string_view, 6> kTwo{"==", "!=", "<=", ">=", "&&", "||"};
        std::string_view rest(text_.data() + pos_, text_.size() - pos_);
        bool matched = false;
        for (auto op : kTwo) {
          if (rest.substr(0, 2) == op) {
            t.text = std::string(op);
            advance();
            advance();
            matched = true;
            break;
          }
        }
        if (!matched) {
          static constexpr std::string_view kOne = "+-*/%<>=!.,;(){}[]@?:&|";
          if (kOne.find(c) == std::string_view::npos) {
            throw SyntaxError(line_, column_, std::string(1, c), "unexpected character");
          }
          t.text = std::string(1, advance());
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        int line = line_, column = column_;
        advance();
        advance();
        for (;;) {
          if (pos_ + 1 >= text_.size()) throw SyntaxError(line, column, "/*", "unterminated comment");
          if (text_[pos_] == '*' && text_[pos_ + 1] == '/') {
            advance();
            advance();
            break;
          }
          advance();
        }
      } else {
        return;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

// ---------------------------------------------------------------------------
// Parse tree. Mirrors the vertex layout documented in parser.hpp; lowered to
// a CpgGraph once signatures are known.

struct Node {
  VertexKind kind;
  std::string code;
  int line = 0;
  std::vector<Node> children;
  bool has_receiver = false;  // CALL only
};

int precedence(std::string_view op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "==" || op == "!=") return 3;
  if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
  if (op == "+" || op == "-") return 5;
  if (op == "*" || op == "/" || op == "%") return 6;
  return 0;
}

std::string render(const Node& n);

std::string render_operand(const Node& child, int parent_prec, bool right_side) {
  std::string text = render(child);
  if (child.kind == VertexKind::BinOp) {
    int p = precedence(child.code);
    if (p < parent_prec || (right_side && p == parent_prec)) return "(" + text + ")";
  }
  return text;
}

// Canonical source text for an expression; whitespace-normalized.
std::string render(const Node& n) {
  switch (n.kind) {
    case VertexKind::Ident:
    case VertexKind::Literal:
      return n.code;
    case VertexKind::BinOp: {
      int p = precedence(n.code);
      return render_operand(n.children[0], p, false) + " " + n.code + " " +
             render_operand(n.children[1], p, true);
    }
    case VertexKind::FieldAccess:
      return render(n.children[0]) + "." + n.code;
    case VertexKind::Call: {
      std::string out;
      std::size_t first_arg = 0;
      if (n.has_receiver) {
        out = render(n.children[0]) + ".";
        first_arg = 1;
      }
      out += n.code + "(";
      for (std::size_t i = first_arg; i < n.children.size(); ++i) {
        if (i > first_arg) out += ", ";
        out += render(n.children[i]);
      }
      return out + ")";
    }
    default:
      return n.code;
  }
}

bool is_modifier(std::string_view word) {
  static constexpr std::array<std::string_view, 10> kMods{
      "public", "private", "protected", "static",       "final",
      "abstract", "native", "synchronized", "transient", "volatile"};
  return std::find(kMods.begin(), kMods.end(), word) != kMods.end();
}

bool is_reserved(std::string_view word) {
  static constexpr std::array<std::string_view, 12> kReserved{
      "class", "if", "else", "while", "return", "true", "false", "null", "for", "do", "new", "void"};
  return std::find(kReserved.begin(), kReserved.end(), word) != kReserved.end() ||
         is_modifier(word);
}

struct MethodDecl {
  Node node;  // METHOD with PARAM and BLOCK children
  std::string signature;
};

struct ClassDecl {
  Node node;  // CLASS; children filled during lowering
  std::vector<Node> fields;
  std::vector<MethodDecl> methods;
  // Source order of members: true = method, index into the matching vector.
  std::vector<std::pair<bool, std::size_t>> order;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  std::vector<ClassDecl> parse_unit() {
    std::vector<ClassDecl> classes;
    while (peek().kind != Tok::End) classes.push_back(parse_class());
    return classes;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  bool at(std::string_view text, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return (t.kind == Tok::Punct || t.kind == Tok::Ident) && t.text == text;
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    throw SyntaxError(t.line, t.column, t.kind == Tok::End ? "<eof>" : t.text, what);
  }
  const Token& expect(std::string_view text) {
    if (!at(text)) fail("expected '" + std::string(text) + "'");
    return next();
  }
  std::string expect_ident(const char* what) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || is_reserved(t.text)) fail(std::string("expected ") + what);
    return next().text;
  }

  void skip_annotations_and_modifiers() {
    for (;;) {
      if (at("@")) {
        next();
        expect_ident("annotation name");
        if (at("(")) skip_balanced("(", ")");
      } else if (peek().kind == Tok::Ident && is_modifier(peek().text)) {
        next();
      } else {
        return;
      }
    }
  }

  void skip_balanced(std::string_view open, std::string_view close) {
    int depth = 0;
    do {
      if (peek().kind == Tok::End) fail("unbalanced '" + std::string(open) + "'");
      if (at(open)) ++depth;
      if (at(close)) --depth;
      next();
    } while (depth > 0);
  }

  // type := name ('.' name)* ['<' type-args '>'] ('[' ']')*
  // Returns false (without consuming) when the tokens do not form a type.
  bool try_type(std::string& out) {
    std::size_t save = pos_;
    out.clear();
    if (!parse_type_into(out)) {
      pos_ = save;
      return false;
    }
    return true;
  }

  bool parse_type_into(std::string& out) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || (is_reserved(t.text) && t.text != "void")) return false;
    out += next().text;
    while (at(".") && peek(1).kind == Tok::Ident) {
      next();
      out += "." + next().text;
    }
    if (at("<")) {
      next();
      out += "<";
      bool first = true;
      while (!at(">")) {
        if (!first) {
          if (!at(",")) return false;
          next();
          out += ",";
        }
        first = false;
        if (at("?")) {
          next();
          out += "?";
          continue;
        }
        if (!parse_type_into(out)) return false;
      }
      next();
      out += ">";
    }
    while (at("[") && at("]", 1)) {
      next();
      next();
      out += "[]";
    }
    return true;
  }

  std::string expect_type() {
    std::string type;
    if (!try_type(type)) fail("expected type");
    return type;
  }

  ClassDecl parse_class() {
    skip_annotations_and_modifiers();
    int line = peek().line;
    expect("class");
    ClassDecl cls;
    cls.node.kind = VertexKind::Class;
    cls.node.line = line;
    cls.node.code = expect_ident("class name");
    if (at("<")) skip_balanced("<", ">");
    if (at("extends")) {
      next();
      expect_type();
    }
    if (at("implements")) {
      next();
      expect_type();
      while (at(",")) {
        next();
        expect_type();
      }
    }
    expect("{");
    while (!at("}")) {
      if (peek().kind == Tok::End) fail("unterminated class body");
      parse_member(cls);
    }
    expect("}");
    return cls;
  }

  void parse_member(ClassDecl& cls) {
    skip_annotations_and_modifiers();
    int line = peek().line;
    std::string type;
    std::string name;
    if (peek().kind == Tok::Ident && peek().text == cls.node.code && at("(", 1)) {
      name = next().text;  // constructor
    } else {
      type = expect_type();
      name = expect_ident("member name");
    }
    if (at("(")) {
      cls.order.emplace_back(true, cls.methods.size());
      cls.methods.push_back(parse_method_rest(cls.node.code, name, line));
      return;
    }
    Node decl{VertexKind::Decl, name, line, {}};
    if (at("=")) {
      int aline = next().line;
      decl.children.push_back(Node{VertexKind::Assign, name, aline, {parse_expr()}});
    }
    expect(";");
    cls.order.emplace_back(false, cls.fields.size());
    cls.fields.push_back(std::move(decl));
  }

  MethodDecl parse_method_rest(const std::string& class_name, const std::string& name, int line) {
    MethodDecl m;
    m.node.kind = VertexKind::Method;
    m.node.code = name;
    m.node.line = line;
    expect("(");
    std::string sig = class_name + "." + name + "(";
    bool first = true;
    while (!at(")")) {
      if (!first) expect(",");
      first = false;
      skip_annotations_and_modifiers();
      int pline = peek().line;
      std::string ptype = expect_type();
      std::string pname = expect_ident("parameter name");
      sig += (sig.back() == '(' ? "" : ",") + ptype;
      m.node.children.push_back(Node{VertexKind::Param, pname, pline, {}});
    }
    expect(")");
    m.signature = sig + ")";
    if (at("throws")) {
      next();
      expect_type();
      while (at(",")) {
        next();
        expect_type();
      }
    }
    if (at(";")) {
      next();
    } else {
      m.node.children.push_back(parse_block());
    }
    return m;
  }

  Node parse_block() {
    int line = expect("{").line;
    Node block{VertexKind::Block, "{}", line, {}};
    while (!at("}")) {
      if (peek().kind == Tok::End) fail("unterminated block");
      block.children.push_back(parse_statement());
    }
    next();
    return block;
  }

  Node parse_statement() {
    const Token& t = peek();
    int line = t.line;
    if (at("{")) return parse_block();
    if (at("if")) {
      next();
      expect("(");
      Node cond = parse_expr();
      expect(")");
      Node node{VertexKind::If, "if", line, {}};
      node.children.push_back(Node{VertexKind::Condition, render(cond), cond.line, {cond}});
      node.children.push_back(parse_statement());
      if (at("else")) {
        next();
        node.children.push_back(parse_statement());
      }
      return node;
    }
    if (at("while")) {
      next();
      expect("(");
      Node cond = parse_expr();
      expect(")");
      Node node{VertexKind::While, "while", line, {}};
      node.children.push_back(Node{VertexKind::Condition, render(cond), cond.line, {cond}});
      node.children.push_back(parse_statement());
      return node;
    }
    if (at("return")) {
      next();
      Node node{VertexKind::Return, "return", line, {}};
      if (!at(";")) node.children.push_back(parse_expr());
      expect(";");
      return node;
    }
    if (t.kind == Tok::Ident && (t.text == "for" || t.text == "do" || t.text == "switch" ||
                                 t.text == "try" || t.text == "throw")) {
      fail("unsupported statement");
    }
    skip_modifiers_in_statement();

    // Declaration: type followed by a name and '=' or ';'.
    {
      std::size_t save = pos_;
      std::string type;
      if (try_type(type) && peek().kind == Tok::Ident && !is_reserved(peek().text) &&
          (at("=", 1) || at(";", 1))) {
        std::string name = next().text;
        Node decl{VertexKind::Decl, name, line, {}};
        if (at("=")) {
          int aline = next().line;
          decl.children.push_back(Node{VertexKind::Assign, name, aline, {parse_expr()}});
        }
        expect(";");
        return decl;
      }
      pos_ = save;
    }

    Node expr = parse_expr();
    if (at("=")) {
      next();
      if (expr.kind != VertexKind::Ident && expr.kind != VertexKind::FieldAccess) {
        fail("invalid assignment target");
      }
      Node value = parse_expr();
      expect(";");
      Node assign{VertexKind::Assign, render(expr), line, {}};
      if (expr.kind == VertexKind::FieldAccess) assign.children.push_back(std::move(expr));
      assign.children.push_back(std::move(value));
      return assign;
    }
    if (expr.kind != VertexKind::Call) fail("expression statement must be a call");
    expect(";");
    return expr;
  }

  void skip_modifiers_in_statement() {
    while (at("final")) next();
  }

  Node parse_expr(int min_prec = 1) {
    Node left = parse_postfix();
    for (;;) {
      const Token& t = peek();
      if (t.kind != Tok::Punct) break;
      int p = precedence(t.text);
      if (p == 0 || p < min_prec) break;
      std::string op = next().text;
      Node right = parse_expr(p + 1);
      int line = left.line;
      left = Node{VertexKind::BinOp, op, line, {std::move(left), std::move(right)}};
    }
    return left;
  }

  Node parse_postfix() {
    Node base = parse_primary();
    while (at(".")) {
      next();
      int line = peek().line;
      std::string name = expect_ident("member name");
      if (at("(")) {
        Node call{VertexKind::Call, name, line, {std::move(base)}};
        call.has_receiver = true;
        parse_args(call);
        base = std::move(call);
      } else {
        base = Node{VertexKind::FieldAccess, name, line, {std::move(base)}};
      }
    }
    return base;
  }

  void parse_args(Node& call) {
    expect("(");
    bool first = true;
    while (!at(")")) {
      if (!first) expect(",");
      first = false;
      call.children.push_back(parse_expr());
    }
    next();
  }

  Node parse_primary() {
    const Token& t = peek();
    int line = t.line;
    switch (t.kind) {
      case Tok::Int:
      case Tok::Str:
      case Tok::Char:
        return Node{VertexKind::Literal, next().text, line, {}};
      case Tok::Ident:
        if (t.text == "true" || t.text == "false" || t.text == "null") {
          return Node{VertexKind::Literal, next().text, line, {}};
        }
        if (t.text == "this") return Node{VertexKind::Ident, next().text, line, {}};
        if (is_reserved(t.text)) fail("unexpected keyword");
        {
          std::string name = next().text;
          if (at("(")) {
            Node call{VertexKind::Call, name, line, {}};
            parse_args(call);
            return call;
          }
          return Node{VertexKind::Ident, name, line, {}};
        }
      case Tok::Punct:
        if (t.text == "(") {
          next();
          Node inner = parse_expr();
          expect(")");
          return inner;
        }
        if (t.text == "-" && peek(1).kind == Tok::Int) {
          next();
          return Node{VertexKind::Literal, "-" + next().text, line, {}};
        }
        fail("expected expression");
      case Tok::End:
        fail("unexpected end of input");
    }
    fail("expected expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Lowering

class Lowering {
 public:
  explicit Lowering(AstFragment& out) : out_(out) {}

  VertexKey lower(const Node& n, const std::string& signature) {
    int& counter = ordinals_[std::make_tuple(signature, n.kind, n.code)];
    CpgVertex v;
    v.kind = n.kind;
    v.code = n.kind == VertexKind::Literal ? n.code : normalize_code(n.code);
    v.signature = signature;
    v.line = n.line;
    v.ordinal = counter++;
    VertexKey key = out_.graph.add_vertex(v);
    std::vector<VertexKey>& kids = out_.children[key];
    for (const Node& c : n.children) {
      VertexKey ck = lower(c, signature);
      out_.graph.add_edge(CpgEdge{key, ck, EdgeType::Ast, {}});
      kids.push_back(ck);
    }
    return key;
  }

  void lower_class(const ClassDecl& cls) {
    const std::string& class_sig = cls.node.code;
    Node shell{VertexKind::Class, cls.node.code, cls.node.line, {}};
    VertexKey ck = lower(shell, class_sig);
    out_.classes.push_back(ck);
    for (const auto& [is_method, index] : cls.order) {
      VertexKey member;
      if (is_method) {
        const MethodDecl& m = cls.methods[index];
        member = lower(m.node, m.signature);
        out_.methods.push_back(member);
      } else {
        member = lower(cls.fields[index], class_sig);
      }
      out_.graph.add_edge(CpgEdge{ck, member, EdgeType::Ast, {}});
      out_.children[ck].push_back(member);
    }
  }

 private:
  AstFragment& out_;
  std::map<std::tuple<std::string, VertexKind, std::string>, int> ordinals_;
};

}  // namespace

const std::vector<VertexKey>& AstFragment::children_of(const VertexKey& key) const {
  static const std::vector<VertexKey> kNone;
  auto it = children.find(key);
  return it == children.end() ? kNone : it->second;
}

const CpgVertex& AstFragment::vertex(const VertexKey& key) const {
  const CpgVertex* v = graph.find(key);
  if (!v) throw IntegrityError("unknown vertex " + key.hex());
  return *v;
}

AstFragment parse_source(const SourceUnit& unit) {
  if (unit.language != kMiniJava) {
    throw SyntaxError(1, 1, unit.language, "unsupported language");
  }
  Parser parser(Lexer(unit.text).run());
  std::vector<ClassDecl> classes = parser.parse_unit();
  if (classes.empty()) throw EmptyUnit("no class declared in '" + unit.path + "'");
  AstFragment out;
  out.graph.set_origin(unit.path);
  Lowering lowering(out);
  for (const auto& cls : classes) lowering.lower_class(cls);
  return out;
}

}  // namespace deltamsg::cpg
