#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lemlearn {

/// Ordered labeled tree over a canonical token alphabet. Bound variables are
/// canonicalized to slots (v0, v1, ...) in order of first appearance, so
/// alpha-renamed statements produce structurally equal trees.
struct ExprTree {
    std::string label;
    std::vector<ExprTree> children;
    int size = 1;  // 1 + sum of children sizes, maintained on construction

    ExprTree() = default;
    explicit ExprTree(std::string lbl) : label(std::move(lbl)) {}
    ExprTree(std::string lbl, std::vector<ExprTree> kids);

    bool operator==(const ExprTree& other) const;
    bool operator!=(const ExprTree& other) const { return !(*this == other); }

    std::string to_sexpr() const;
    static ExprTree from_sexpr(std::string_view text);
};

ExprTree make_leaf(std::string label);
ExprTree make_node(std::string label, std::vector<ExprTree> children);

/// A formal theorem declaration split into its syntactic parts.
struct TheoremStatement {
    std::string name;
    std::string raw_source;     // full declaration, proof or `sorry` body included
    std::vector<std::string> hypotheses;  // binder segments, delimiters kept
    std::string goal;           // conclusion segment
    std::string imports_header; // opaque preamble (imports, opens, options)

    /// Parses a theorem source (optionally preceded by an imports header).
    /// Throws ParseError on unbalanced delimiters, missing/duplicated theorem
    /// keyword, or an empty statement body.
    static TheoremStatement parse(const std::string& source);

    /// The declaration text without the imports header.
    std::string declaration() const;
};

struct SimilarityScore {
    double value = 0.0;  // in [0, 1]
};

/// Converts a statement into its simplified first-order expression tree.
/// Hypotheses fold into right-nested implication nodes around the goal;
/// unparseable fragments degrade to atom leaves rather than failing.
ExprTree parse_to_expr_tree(const TheoremStatement& stmt);

/// Minimal number of node insertions, deletions, and relabelings between
/// ordered trees (Zhang-Shasha, unit costs).
int tree_edit_distance(const ExprTree& a, const ExprTree& b);

/// Fraction of source nodes covered by the best label-preserving top-down
/// alignment of source into target. Asymmetric: source aligned into target.
SimilarityScore structural_similarity(const ExprTree& source, const ExprTree& target);

/// True iff tree_edit_distance(a,b) / max(a.size, b.size) <= threshold.
bool is_duplicate(const ExprTree& a, const ExprTree& b, double threshold);

}  // namespace lemlearn
