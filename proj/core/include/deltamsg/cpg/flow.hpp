#pragma once

#include "deltamsg/cpg/graph.hpp"
#include "deltamsg/cpg/parser.hpp"

namespace deltamsg::cpg {

// Intra-method control flow. Nodes are statement vertices (DECL, ASSIGN,
// IF, WHILE, RETURN, call statements, and empty blocks, which act as no-ops).
// Non-empty blocks are transparent. Falling off the end of a method flows to
// the METHOD vertex, which serves as the exit sink.
//
//   straight-line statement   one successor
//   IF                        "true" edge to the then-branch, "false" edge to
//                             the else-branch or the join point
//   WHILE                     "true" edge into the body, "false" edge to exit
//   RETURN                    no successor
EdgeSet build_cfg(const AstFragment& ast);

// Program dependences over the CFG of the same fragment.
//
// PDG_DATA def -> use, labelled with the variable, for every definition
// reaching the use (forward reaching-definitions over the CFG; parameters are
// definitions at method entry). A statement does not depend on itself.
//
// PDG_CTRL from the CONDITION of each IF/WHILE to every statement directly
// in its branches.
EdgeSet build_pdg(const AstFragment& ast, const EdgeSet& cfg);

}  // namespace deltamsg::cpg
