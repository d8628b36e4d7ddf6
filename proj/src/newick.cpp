#include <algorithm>
#include <cctype>
#include <limits>

#include "phyred/tree.hpp"

namespace phyred {
namespace {

struct RawNode {
    int parent = -1;
    int label = 0;
    std::vector<int> children;
};

class NewickParser {
public:
    explicit NewickParser(std::string_view text) : text_(text) {}

    std::vector<RawNode> parse() {
        skip_ws();
        int root = subtree(-1);
        skip_ws();
        expect(';');
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters after ';'");
        (void)root;
        return std::move(nodes_);
    }

    std::size_t position() const { return pos_; }

private:
    [[noreturn]] void fail(const std::string& what) const { throw NewickError(what, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    void expect(char c) {
        if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
        if (text_[pos_] != c) fail(std::string("expected '") + c + "', found '" + text_[pos_] + "'");
        ++pos_;
    }

    int new_node(int parent) {
        nodes_.push_back({parent, 0, {}});
        int id = static_cast<int>(nodes_.size()) - 1;
        if (parent >= 0) nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
        return id;
    }

    int subtree(int parent) {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        int id = new_node(parent);
        if (text_[pos_] == '(') {
            ++pos_;
            subtree(id);
            skip_ws();
            while (pos_ < text_.size() && text_[pos_] == ',') {
                ++pos_;
                subtree(id);
                skip_ws();
            }
            expect(')');
            skip_ws();
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                fail("internal node labels are not supported");
        } else {
            nodes_[static_cast<std::size_t>(id)].label = read_label();
        }
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ':') fail("branch lengths are not supported");
        return id;
    }

    int read_label() {
        std::size_t start = pos_;
        long long value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            value = value * 10 + (text_[pos_] - '0');
            if (value > std::numeric_limits<int>::max()) fail("label too large");
            ++pos_;
        }
        if (pos_ == start) {
            if (pos_ < text_.size()) fail(std::string("unexpected character '") + text_[pos_] + "'");
            fail("unexpected end of input");
        }
        if (value == 0) throw NewickError("unknown label 0", start);
        return static_cast<int>(value);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::vector<RawNode> nodes_;
};

int min_label(const Tree& t, int v, int from, std::vector<int>& memo) {
    if (memo[static_cast<std::size_t>(v)] != 0) return memo[static_cast<std::size_t>(v)];
    int best = t.is_leaf(v) ? t.label(v) : std::numeric_limits<int>::max();
    for (const auto& nb : t.neighbors(v))
        if (nb.vertex != from) best = std::min(best, min_label(t, nb.vertex, v, memo));
    return memo[static_cast<std::size_t>(v)] = best;
}

void write_subtree(const Tree& t, int v, int from, std::vector<int>& memo, std::string& out) {
    if (t.is_leaf(v) && from >= 0) {
        out += std::to_string(t.label(v));
        return;
    }
    std::vector<std::pair<int, int>> kids;
    for (const auto& nb : t.neighbors(v))
        if (nb.vertex != from) kids.emplace_back(min_label(t, nb.vertex, v, memo), nb.vertex);
    std::sort(kids.begin(), kids.end());
    out += '(';
    for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i) out += ',';
        write_subtree(t, kids[i].second, v, memo, out);
    }
    out += ')';
}

}  // namespace

Tree parse_newick(std::string_view text) {
    NewickParser parser(text);
    std::vector<RawNode> nodes = parser.parse();
    const std::size_t end = text.size();

    int n = 0;
    for (const auto& nd : nodes)
        if (nd.children.empty()) ++n;
    std::vector<int> seen(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& nd : nodes) {
        if (!nd.children.empty()) continue;
        if (nd.label > n)
            throw NewickError("unknown label " + std::to_string(nd.label) + " (leaves must be labelled 1.." +
                                  std::to_string(n) + ")",
                              end);
        if (seen[static_cast<std::size_t>(nd.label)]++)
            throw NewickError("duplicate label " + std::to_string(nd.label), end);
    }

    // Renumber: leaf L -> L-1, internal nodes in pre-order from n upward.
    std::vector<int> id(nodes.size(), -1);
    int next_internal = n;
    bool drop_root = nodes[0].children.size() == 2;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].children.empty())
            id[i] = nodes[i].label - 1;
        else if (!(i == 0 && drop_root))
            id[i] = next_internal++;
    }

    std::vector<Edge> edges;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        int p = nodes[i].parent;
        if (p == 0 && drop_root) continue;
        edges.push_back({id[static_cast<std::size_t>(p)], id[i]});
    }
    if (drop_root)
        edges.push_back({id[static_cast<std::size_t>(nodes[0].children[0])],
                         id[static_cast<std::size_t>(nodes[0].children[1])]});

    Tree tree = Tree::normalized(n, next_internal, std::move(edges));
    auto violations = validate(tree);
    if (!violations.empty()) throw NewickError("invalid tree: " + violations.front(), end);
    return tree;
}

std::string write_newick(const Tree& tree) {
    if (tree.vertex_count() == 1) return std::to_string(tree.label(0)) + ";";
    std::vector<int> memo(static_cast<std::size_t>(tree.vertex_count()), 0);
    std::string out;
    int root = tree.canonical_root();
    if (tree.is_leaf(root)) {
        // two-leaf tree: no internal vertex to root at
        out = "(" + std::to_string(std::min(tree.label(0), tree.label(1))) + "," +
              std::to_string(std::max(tree.label(0), tree.label(1))) + ")";
    } else {
        write_subtree(tree, root, -1, memo, out);
    }
    out += ';';
    return out;
}

}  // namespace phyred
