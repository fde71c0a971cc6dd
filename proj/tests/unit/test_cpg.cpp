#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "deltamsg/cpg/cpg.hpp"
#include "deltamsg/errors.hpp"
#include "oracles.hpp"
#include "program_gen.hpp"

using namespace deltamsg;
using namespace deltamsg::cpg;
namespace dt = deltamsg::testing;

namespace {

CpgGraph build(const std::string& text) { return build_cpg(SourceUnit{"A.java", text}); }

std::string method(const std::string& body) { return "class A { void f(int c) { " + body + " } }"; }

const CpgVertex& only(const CpgGraph& g, VertexKind kind, const std::string& code) {
  const CpgVertex* hit = nullptr;
  for (const auto& [k, v] : g.vertices()) {
    if (v.kind == kind && v.code == code) {
      EXPECT_EQ(hit, nullptr) << "duplicate " << to_string(kind) << " " << code;
      hit = &v;
    }
  }
  if (!hit) throw std::runtime_error("no vertex " + std::string(to_string(kind)) + " " + code);
  return *hit;
}

bool has_edge(const CpgGraph& g, const CpgVertex& s, const CpgVertex& d, EdgeType t, const std::string& label = "") {
  return g.edges().count(CpgEdge{s.key, d.key, t, label}) != 0;
}

std::size_t count(const CpgGraph& g, EdgeType t) { return g.edges_of_type(t).size(); }

}  // namespace

TEST(Parser, DeclarationWithInitializer) {
  const auto ast = parse_source({"A.java", "class A { void f() { int x = 1; } }"});
  const auto& g = ast.graph;
  const auto& cls = only(g, VertexKind::Class, "A");
  const auto& m = only(g, VertexKind::Method, "f");
  const auto& decl = only(g, VertexKind::Decl, "x");
  const auto& assign = only(g, VertexKind::Assign, "x");
  const auto& lit = only(g, VertexKind::Literal, "1");
  EXPECT_TRUE(has_edge(g, cls, m, EdgeType::Ast));
  ASSERT_EQ(ast.children_of(m.key).size(), 1u);
  const auto& block = ast.vertex(ast.children_of(m.key)[0]);
  EXPECT_EQ(block.kind, VertexKind::Block);
  EXPECT_TRUE(has_edge(g, block, decl, EdgeType::Ast));
  EXPECT_TRUE(has_edge(g, decl, assign, EdgeType::Ast));
  EXPECT_TRUE(has_edge(g, assign, lit, EdgeType::Ast));
  EXPECT_EQ(m.signature, "A.f()");
}

TEST(Parser, ConditionHoldsComparison) {
  const auto g = build("class A { void f() { if (x > 0) return; } }");
  const auto& cond = only(g, VertexKind::Condition, "x > 0");
  const auto& op = only(g, VertexKind::BinOp, ">");
  EXPECT_TRUE(has_edge(g, only(g, VertexKind::If, "if"), cond, EdgeType::Ast));
  EXPECT_TRUE(has_edge(g, cond, op, EdgeType::Ast));
  EXPECT_TRUE(has_edge(g, op, only(g, VertexKind::Ident, "x"), EdgeType::Ast));
  EXPECT_TRUE(has_edge(g, op, only(g, VertexKind::Literal, "0"), EdgeType::Ast));
}

TEST(Parser, EmptyInputs) {
  EXPECT_THROW(parse_source({"A.java", ""}), EmptyUnit);
  EXPECT_THROW(parse_source({"A.java", "  // nothing here\n"}), EmptyUnit);
}

TEST(Parser, SyntaxErrorCarriesPosition) {
  try {
    parse_source({"A.java", "class A {\n  void f( {\n}"});
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_GT(e.column(), 0);
    EXPECT_FALSE(e.token().empty());
  }
  EXPECT_THROW(parse_source({"A.java", "class A { void f() { for (;;) {} } }"}), SyntaxError);
}

TEST(Parser, CommentsAndFormattingDoNotMoveKeys) {
  const auto a = build("class A { void f(int c) { int x = c; if (x > 1) { x = 2; } } }");
  const auto b = build(
      "// header\nclass A {\n\n  /* doc */\n  void f(int c) {\n    int x = c;\n"
      "    if (x > 1) {\n      x = 2; // set\n    }\n  }\n}\n");
  EXPECT_EQ(a.edges(), b.edges());
  ASSERT_EQ(a.vertices().size(), b.vertices().size());
  for (auto ia = a.vertices().begin(), ib = b.vertices().begin(); ia != a.vertices().end(); ++ia, ++ib) {
    EXPECT_EQ(ia->first, ib->first);
  }
}

TEST(Parser, IdenticalMethodsAreDistinguishedBySignature) {
  const auto g = build("class A { void f() { int x = 1; } void g() { int x = 1; } }");
  std::set<std::string> sigs;
  for (const auto& [k, v] : g.vertices()) {
    if (v.kind == VertexKind::Decl) sigs.insert(v.signature);
  }
  EXPECT_EQ(sigs, (std::set<std::string>{"A.f()", "A.g()"}));
}

TEST(Cfg, StraightLine) {
  const auto g = build(method("int x = 1; int y = 2;"));
  const auto& x = only(g, VertexKind::Decl, "x");
  const auto& y = only(g, VertexKind::Decl, "y");
  EXPECT_TRUE(has_edge(g, x, y, EdgeType::Cfg));
  // y falls off the end of the method into the exit sink.
  EXPECT_TRUE(has_edge(g, y, only(g, VertexKind::Method, "f"), EdgeType::Cfg));
  EXPECT_EQ(count(g, EdgeType::Cfg), 2u);
}

TEST(Cfg, IfWithoutElse) {
  const auto g = build(method("if (c > 0) x = 1; y = 2;"));
  const auto& i = only(g, VertexKind::If, "if");
  const auto& s1 = only(g, VertexKind::Assign, "x");
  const auto& s2 = only(g, VertexKind::Assign, "y");
  EXPECT_TRUE(has_edge(g, i, s1, EdgeType::Cfg, "true"));
  EXPECT_TRUE(has_edge(g, i, s2, EdgeType::Cfg, "false"));
  EXPECT_TRUE(has_edge(g, s1, s2, EdgeType::Cfg));
}

TEST(Cfg, WhileLoopsBack) {
  const auto g = build(method("while (c > 0) { c = c - 1; } return;"));
  const auto& w = only(g, VertexKind::While, "while");
  const auto& body = only(g, VertexKind::Assign, "c");
  const auto& ret = only(g, VertexKind::Return, "return");
  EXPECT_TRUE(has_edge(g, w, body, EdgeType::Cfg, "true"));
  EXPECT_TRUE(has_edge(g, body, w, EdgeType::Cfg));
  EXPECT_TRUE(has_edge(g, w, ret, EdgeType::Cfg, "false"));
}

TEST(Cfg, ReturnHasNoSuccessor) {
  const auto g = build(method("int x = 1; return x;"));
  const auto& ret = only(g, VertexKind::Return, "return");
  for (const auto& e : g.edges_of_type(EdgeType::Cfg)) EXPECT_NE(e.src, ret.key);
}

TEST(Pdg, DeclarationFeedsUse) {
  const auto g = build(method("int x = 1; int y = x;"));
  EXPECT_TRUE(has_edge(g, only(g, VertexKind::Decl, "x"), only(g, VertexKind::Decl, "y"), EdgeType::PdgData, "x"));
}

TEST(Pdg, ConditionGuardsBranch) {
  const auto g = build(method("if (c > 0) { x = 1; }"));
  EXPECT_TRUE(has_edge(g, only(g, VertexKind::Condition, "c > 0"), only(g, VertexKind::Assign, "x"), EdgeType::PdgCtrl));
}

TEST(Pdg, LaterAssignmentKillsEarlier) {
  const auto g = build("class A { void f() { x = 1; x = 2; y = x; } }");
  const auto& y = only(g, VertexKind::Assign, "y");
  std::vector<CpgEdge> into_y;
  for (const auto& e : g.edges_of_type(EdgeType::PdgData)) {
    if (e.dst == y.key) into_y.push_back(e);
  }
  ASSERT_EQ(into_y.size(), 1u);
  EXPECT_EQ(g.find(into_y[0].src)->line, 1);
  EXPECT_EQ(g.find(into_y[0].src)->ordinal, 1);
}

TEST(Pdg, NestedCallUnderComparisonIsGuarded) {
  const auto g = build(
      "class Locks { void scan(Node root) { if (root.pending().size() >= 0) { buildGraph(root); } } }");
  const auto& op = only(g, VertexKind::BinOp, ">=");
  const auto& cond = only(g, VertexKind::Condition, "root.pending().size() >= 0");
  EXPECT_TRUE(has_edge(g, cond, op, EdgeType::Ast));
  EXPECT_TRUE(has_edge(g, cond, only(g, VertexKind::Call, "buildGraph"), EdgeType::PdgCtrl));
}

TEST(Cpg, SingleAssignmentMethod) {
  const auto g = build("class A { void f() { x = 1; } }");
  // The only CFG edge is the fall-through into the exit sink.
  EXPECT_EQ(count(g, EdgeType::Cfg), 1u);
  EXPECT_EQ(count(g, EdgeType::PdgData) + count(g, EdgeType::PdgCtrl), 0u);
}

TEST(Cpg, MatchesPathEnumerationOracle) {
  dt::ProgramGenerator gen(17);
  for (int i = 0; i < 200; ++i) {
    const auto p = gen.program(6);
    const auto g = build(dt::render(p));
    const auto data = g.edges_of_type(EdgeType::PdgData);
    EXPECT_EQ(EdgeSet(data.begin(), data.end()), dt::path_reaching_data_edges(g)) << dt::render(p);
  }
}

TEST(Cpg, ValidatesAndRejectsSelfLoops) {
  CpgGraph g;
  CpgVertex v;
  v.kind = VertexKind::Ident;
  v.code = "x";
  v.signature = "A";
  v.key = VertexKey::make(v.kind, v.code, v.signature, 0);
  g.add_vertex(v);
  EXPECT_NO_THROW(g.add_vertex(v));
  EXPECT_THROW(g.add_edge(CpgEdge{v.key, v.key, EdgeType::Cfg, ""}), IntegrityError);
  EXPECT_THROW(g.add_edge(CpgEdge{v.key, VertexKey::make(VertexKind::Ident, "y", "A", 0), EdgeType::Ast, ""}),
               IntegrityError);
}

TEST(Interchange, RoundTripOnRandomPrograms) {
  dt::ProgramGenerator gen(23);
  for (int i = 0; i < 50; ++i) {
    const auto g = build(dt::render(gen.program(6)));
    const std::string text = export_cpg_json(g);
    const auto back = import_cpg_json(text);
    EXPECT_EQ(back, g);
    EXPECT_EQ(export_cpg_json(back), text);
  }
}

TEST(Interchange, EmptyGraphAccepted) {
  EXPECT_TRUE(import_cpg_json(R"({"vertices":[],"edges":[]})").empty());
}

TEST(Interchange, Errors) {
  EXPECT_THROW(import_cpg_json(R"({"vertices":[],"edges":[{"src_index":0,"dst_index":1,"etype":"AST","label":""}]})"),
               IntegrityError);
  try {
    import_cpg_json(R"({"vertices":[{"kind":"IDENT","code":"x","signature":"A","ordinal":0,"line":1}],
                        "edges":[{"src_index":0,"dst_index":0,"etype":"BOGUS","label":""}]})");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.field_path(), "edges[0].etype");
  }
  EXPECT_THROW(import_cpg_json(R"({"vertices":[{"kind":"IDENT","code":"x","signature":"A","ordinal":0,"line":1,"x":1}],"edges":[]})"),
               FormatError);
  EXPECT_THROW(import_cpg_json("not json"), FormatError);
}

TEST(Interchange, LoadVersionDispatchesOnExtension) {
  const auto dir = std::filesystem::temp_directory_path() / "deltamsg_cpg_test";
  std::filesystem::create_directories(dir);
  const std::string src = "class A { void f() { int x = 1; } }";
  { std::ofstream(dir / "A.java") << src; }
  const auto g = load_version(dir / "A.java");
  { std::ofstream(dir / "A.json") << export_cpg_json(g); }
  EXPECT_EQ(load_version(dir / "A.json"), g);
  EXPECT_THROW(load_version(dir / "missing.java"), IoError);
  std::filesystem::remove_all(dir);
}
