#pragma once

// =============================================================================
// Netlist: textual single-loop circuit descriptions
// =============================================================================
//   circuit   := "circuit" "{" item+ "}"
//   item      := element | parallel | drive
//   element   := ("L"|"C"|"R"|"M") "{" kv ("," kv)* "}"
//   parallel  := "parallel" "{" element element "}"
//   drive     := "drive" "{" driveform "}"
//   driveform := "zero" | "const(" num ")" | "sin(amp=" num ",omega=" num ",phase=" num ")"
//   kv        := ident "=" (num | polylit)
//   polylit   := "poly(" var ";" num ("," num)* ")"      ascending powers
//
// Whitespace-insensitive; '#' starts a comment running to end of line.
// Keys: L{L0 | L=poly(I;...)}  C{C0 | C=poly(q;...) | dPhi=poly(q;...)}
//       R{R0 | R=poly(I;...)}  M{M0 | M=poly(q;...)}
// =============================================================================

#include "stochcirc/circuit.hpp"
#include "stochcirc/errors.hpp"

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace stochcirc {

struct PolyLiteral {
    std::string variable;
    std::vector<double> coefficients;
    SourceSpan span;
};

using ParamValue = std::variant<double, PolyLiteral>;

struct Param {
    std::string key;
    ParamValue value;
    SourceSpan span;
};

struct ElementNode {
    ElementKind kind;
    std::vector<Param> params;
    SourceSpan span;
};

struct ParallelNode {
    std::vector<ElementNode> elements;
    SourceSpan span;
};

enum class DriveForm { zero, constant, sinusoid };

struct DriveNode {
    DriveForm form = DriveForm::zero;
    double value = 0.0;
    double amplitude = 0.0;
    double omega = 0.0;
    double phase = 0.0;
    SourceSpan span;
};

using ItemNode = std::variant<ElementNode, ParallelNode, DriveNode>;

struct NetlistAst {
    std::vector<ItemNode> items;
    SourceSpan span;
};

/// Parses and checks arity rules (one L, at most one C, at most one drive).
/// Throws ParseError carrying line/column and the expected-token set.
NetlistAst parse_netlist(std::string_view text);

/// Canonical text form; parse(print(ast)) reproduces ast up to spans.
std::string print_netlist(const NetlistAst& ast);

/// Structural equality ignoring source spans.
bool same_structure(const NetlistAst& a, const NetlistAst& b);

struct CompileOptions {
    Interval domain = kDefaultDomain;
};

/// Normalizes to (L, C, dissipators) and builds the circuit description.
/// Throws ParseError for structural problems, PassivityError for bad coefficients.
CircuitSpec compile_spec(const NetlistAst& ast, const CompileOptions& options = {});
PhaseSpaceModel compile(const NetlistAst& ast, const CompileOptions& options = {});

}  // namespace stochcirc
