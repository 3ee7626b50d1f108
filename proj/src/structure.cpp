#include "mlc/structure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <utility>

#include "mlc/errors.hpp"
#include "mlc/rng.hpp"

namespace mlc {

namespace {

// p * ln(p / (pa * pb)) with 0 ln 0 = 0, from raw counts.
double mi_term(std::size_t joint, std::size_t a, std::size_t b, double n) {
    if (joint == 0) return 0.0;
    const double pj = static_cast<double>(joint) / n;
    return pj * std::log(pj * n * n / (static_cast<double>(a) * static_cast<double>(b)));
}

using Edge = std::pair<std::size_t, std::size_t>;

std::set<Edge> undirected_edges(const ParentSets& parents) {
    std::set<Edge> edges;
    for (std::size_t child = 0; child < parents.size(); ++child)
        for (std::size_t p : parents[child]) edges.emplace(std::min(p, child), std::max(p, child));
    return edges;
}

// Edge rule shared by FS and LEAD.
DirectedStructure top_mi_predecessors(const MiMatrix& mi, std::size_t max_parents,
                                      double threshold, std::uint64_t seed) {
    if (max_parents < 1) throw ConfigError("max_parents must be at least 1");
    if (threshold < 0.0) throw ConfigError("threshold must be nonnegative");
    const std::size_t l = mi.size();
    std::vector<std::size_t> order(l);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(std::span(order));

    ParentSets parents(l);
    std::vector<std::size_t> candidates;
    for (std::size_t pos = 1; pos < l; ++pos) {
        const std::size_t child = order[pos];
        candidates.clear();
        for (std::size_t q = 0; q < pos; ++q)
            if (mi(child, order[q]) > threshold) candidates.push_back(order[q]);
        std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
            const double ma = mi(child, a), mb = mi(child, b);
            return ma != mb ? ma > mb : a < b;
        });
        if (candidates.size() > max_parents) candidates.resize(max_parents);
        std::sort(candidates.begin(), candidates.end());
        parents[child] = candidates;
    }
    return DirectedStructure::from_parents(std::move(parents));
}

}  // namespace

ParentPattern parse_pattern(std::string_view name) {
    if (name == "left+above") return ParentPattern::LeftAbove;
    if (name == "left+diag+above") return ParentPattern::LeftAboveDiagonal;
    if (name == "left+diag+above+antidiag") return ParentPattern::LeftAboveBothDiagonals;
    throw ConfigError("unknown trellis pattern '" + std::string(name) + "'");
}

std::string_view pattern_name(ParentPattern pattern) {
    switch (pattern) {
        case ParentPattern::LeftAbove: return "left+above";
        case ParentPattern::LeftAboveDiagonal: return "left+diag+above";
        case ParentPattern::LeftAboveBothDiagonals: return "left+diag+above+antidiag";
    }
    return "?";
}

std::vector<std::size_t> trellis_parent_positions(std::size_t position, std::size_t width,
                                                  ParentPattern pattern) {
    const std::size_t row = position / width;
    const std::size_t col = position % width;
    std::vector<std::size_t> out;
    if (col > 0) out.push_back(position - 1);
    if (row == 0) return out;
    const std::size_t above = position - width;
    if (pattern != ParentPattern::LeftAbove && col > 0) out.push_back(above - 1);
    out.push_back(above);
    if (pattern == ParentPattern::LeftAboveBothDiagonals && col + 1 < width)
        out.push_back(above + 1);
    return out;
}

DirectedStructure DirectedStructure::from_parents(ParentSets parents) {
    const std::size_t l = parents.size();
    std::vector<std::size_t> indegree(l, 0);
    std::vector<std::vector<std::size_t>> children(l);
    for (std::size_t c = 0; c < l; ++c) {
        for (std::size_t p : parents[c]) {
            if (p >= l || p == c) throw InputError("invalid parent index in structure");
            children[p].push_back(c);
            ++indegree[c];
        }
    }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t c = 0; c < l; ++c)
        if (indegree[c] == 0) ready.push(c);
    std::vector<std::size_t> topo;
    topo.reserve(l);
    while (!ready.empty()) {
        const std::size_t v = ready.top();
        ready.pop();
        topo.push_back(v);
        for (std::size_t c : children[v])
            if (--indegree[c] == 0) ready.push(c);
    }
    if (topo.size() != l) throw InputError("structure contains a directed cycle");
    return DirectedStructure{std::move(parents), std::move(topo)};
}

DirectedStructure TrellisStructure::directed() const {
    return DirectedStructure{parents, order};
}

ParentSets TrellisStructure::neighbors() const {
    ParentSets out(parents.size());
    for (std::size_t c = 0; c < parents.size(); ++c) {
        for (std::size_t p : parents[c]) {
            out[c].push_back(p);
            out[p].push_back(c);
        }
    }
    for (auto& set : out) {
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
    }
    return out;
}

std::size_t default_trellis_width(std::size_t l) {
    std::size_t w = static_cast<std::size_t>(std::sqrt(static_cast<double>(l)));
    while (w * w < l) ++w;
    while (w > 1 && (w - 1) * (w - 1) >= l) --w;
    return std::max<std::size_t>(w, 1);
}

MiMatrix mutual_information_matrix(const BitMatrix& labels) {
    const std::size_t n = labels.rows();
    const std::size_t l = labels.cols();
    if (n == 0) throw InputError("mutual information needs at least one instance");
    MiMatrix mi(l);
    std::vector<std::size_t> ones(l, 0);
    for (std::size_t r = 0; r < n; ++r) {
        auto row = labels.row(r);
        for (std::size_t a = 0; a < l; ++a) ones[a] += row[a];
    }
    // Column-major copy so each pair scans two contiguous arrays.
    std::vector<std::vector<std::uint8_t>> cols(l, std::vector<std::uint8_t>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t a = 0; a < l; ++a) cols[a][r] = labels(r, a);

    const double nn = static_cast<double>(n);
    for (std::size_t a = 0; a < l; ++a) {
        const auto& ca = cols[a];
        for (std::size_t b = a + 1; b < l; ++b) {
            const auto& cb = cols[b];
            std::size_t n11 = 0;
            for (std::size_t r = 0; r < n; ++r) n11 += ca[r] & cb[r];
            const std::size_t a1 = ones[a], b1 = ones[b];
            const std::size_t a0 = n - a1, b0 = n - b1;
            const std::size_t n10 = a1 - n11, n01 = b1 - n11;
            const std::size_t n00 = n - n11 - n10 - n01;
            double value = mi_term(n11, a1, b1, nn) + mi_term(n10, a1, b0, nn) +
                           mi_term(n01, a0, b1, nn) + mi_term(n00, a0, b0, nn);
            mi.set(a, b, std::max(value, 0.0));
        }
    }
    return mi;
}

TrellisStructure build_trellis(const MiMatrix& mi, std::size_t width, ParentPattern pattern,
                               std::uint64_t seed) {
    const std::size_t l = mi.size();
    if (l == 0) throw InputError("cannot build a trellis over zero labels");
    if (width < 1 || width > l)
        throw ConfigError("trellis width must satisfy 1 <= width <= L (width=" +
                          std::to_string(width) + ", L=" + std::to_string(l) + ")");

    std::vector<std::size_t> shuffled(l);
    std::iota(shuffled.begin(), shuffled.end(), 0);
    Rng rng(seed);
    rng.shuffle(std::span(shuffled));
    // Candidates are scanned in label order (cache-friendly MI rows); rank
    // keeps the shuffle for tie-breaking.
    std::vector<std::size_t> rank(l);
    for (std::size_t i = 0; i < l; ++i) rank[shuffled[i]] = i;
    std::vector<std::size_t> remaining(l);
    std::iota(remaining.begin(), remaining.end(), 0);

    TrellisStructure out;
    out.width = width;
    out.pattern = pattern;
    out.order.reserve(l);
    out.parents.assign(l, {});

    std::vector<std::size_t> parent_labels;
    for (std::size_t pos = 0; pos < l; ++pos) {
        parent_labels.clear();
        for (std::size_t p : trellis_parent_positions(pos, width, pattern))
            parent_labels.push_back(out.order[p]);

        std::size_t best = 0;
        double best_score = -1.0;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            const std::size_t k = remaining[i];
            double score = 0.0;
            for (std::size_t j : parent_labels) score += mi(j, k);
            if (score > best_score || (score == best_score && rank[k] < rank[remaining[best]])) {
                best_score = score;
                best = i;
            }
        }
        const std::size_t label = remaining[best];
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
        out.order.push_back(label);
        std::vector<std::size_t> sorted = parent_labels;
        std::sort(sorted.begin(), sorted.end());
        out.parents[label] = std::move(sorted);
    }
    return out;
}

DirectedStructure fs_structure(const BitMatrix& labels, std::size_t max_parents, double threshold,
                               std::uint64_t seed) {
    return top_mi_predecessors(mutual_information_matrix(labels), max_parents, threshold, seed);
}

BitMatrix residual_errors(const Dataset& dataset, const SgdConfig& base) {
    dataset.validate();
    BitMatrix errors(dataset.n(), dataset.l());
    std::vector<std::uint8_t> targets(dataset.n());
    for (std::size_t l = 0; l < dataset.l(); ++l) {
        for (std::size_t r = 0; r < dataset.n(); ++r) targets[r] = dataset.labels(r, l);
        SgdConfig cfg = base;
        cfg.seed = derive_seed(base.seed, l);
        const LinearModel model = train_binary(dataset.features, targets, cfg);
        for (std::size_t r = 0; r < dataset.n(); ++r) {
            const std::uint8_t predicted = predict_proba(model, dataset.features.row(r)) > 0.5;
            errors(r, l) = predicted != targets[r];
        }
    }
    return errors;
}

DirectedStructure lead_structure(const Dataset& dataset, const SgdConfig& base,
                                 std::size_t max_parents, double threshold, std::uint64_t seed) {
    return top_mi_predecessors(mutual_information_matrix(residual_errors(dataset, base)),
                               max_parents, threshold, seed);
}

DirectedStructure spanning_tree_structure(const MiMatrix& mi, std::uint64_t seed) {
    const std::size_t l = mi.size();
    if (l == 0) throw InputError("cannot build a spanning tree over zero labels");

    std::vector<Edge> pairs;
    pairs.reserve(l * (l - 1) / 2);
    for (std::size_t a = 0; a < l; ++a)
        for (std::size_t b = a + 1; b < l; ++b) pairs.emplace_back(a, b);
    std::stable_sort(pairs.begin(), pairs.end(), [&](const Edge& x, const Edge& y) {
        return mi(x.first, x.second) > mi(y.first, y.second);
    });

    std::vector<std::size_t> root_of(l);
    std::iota(root_of.begin(), root_of.end(), 0);
    auto find = [&](std::size_t v) {
        while (root_of[v] != v) v = root_of[v] = root_of[root_of[v]];
        return v;
    };
    std::vector<std::vector<std::size_t>> adjacent(l);
    std::size_t added = 0;
    for (const auto& [a, b] : pairs) {
        if (added + 1 == l) break;
        const std::size_t ra = find(a), rb = find(b);
        if (ra == rb) continue;
        root_of[ra] = rb;
        adjacent[a].push_back(b);
        adjacent[b].push_back(a);
        ++added;
    }

    Rng rng(seed);
    const auto root = static_cast<std::size_t>(rng.index(l));
    ParentSets parents(l);
    std::vector<bool> seen(l, false);
    std::vector<std::size_t> queue{root};
    seen[root] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::size_t v = queue[head];
        for (std::size_t u : adjacent[v]) {
            if (seen[u]) continue;
            seen[u] = true;
            parents[u] = {v};
            queue.push_back(u);
        }
    }
    return DirectedStructure::from_parents(std::move(parents));
}

DirectedStructure truth_structure(const GroundTruthGraph& truth) {
    ParentSets parents(truth.l());
    for (std::size_t c = 0; c < truth.l(); ++c)
        if (truth.parent[c]) parents[c] = {*truth.parent[c]};
    return DirectedStructure::from_parents(std::move(parents));
}

double edge_f_measure(const DirectedStructure& predicted, const DirectedStructure& truth) {
    if (predicted.l() != truth.l()) throw InputError("structures have different label counts");
    const auto p = undirected_edges(predicted.parents);
    const auto t = undirected_edges(truth.parents);
    if (p.empty() && t.empty()) return 1.0;
    std::size_t common = 0;
    for (const auto& e : p) common += t.count(e);
    if (common == 0) return 0.0;
    const double precision = static_cast<double>(common) / static_cast<double>(p.size());
    const double recall = static_cast<double>(common) / static_cast<double>(t.size());
    return 2.0 * precision * recall / (precision + recall);
}

double edge_f_measure(const DirectedStructure& predicted, const GroundTruthGraph& truth) {
    if (predicted.l() != truth.l()) throw InputError("structures have different label counts");
    return edge_f_measure(predicted, truth_structure(truth));
}

std::string format_adjacency(const ParentSets& parents) {
    std::string out;
    for (std::size_t c = 0; c < parents.size(); ++c) {
        out += std::to_string(c);
        out += ':';
        for (std::size_t i = 0; i < parents[c].size(); ++i) {
            out += i ? "," : " ";
            out += std::to_string(parents[c][i]);
        }
        out += '\n';
    }
    return out;
}

ParentSets parse_adjacency(std::string_view text) {
    ParentSets parents;
    std::size_t line_no = 0;
    auto parse_index = [&](std::string_view s) {
        while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
            throw ParseError(line_no, "bad label index '" + std::string(s) + "'");
        return v;
    };
    while (!text.empty()) {
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        if (line.empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) throw ParseError(line_no, "missing ':'");
        if (parse_index(line.substr(0, colon)) != parents.size())
            throw ParseError(line_no, "labels must be listed in index order");
        std::vector<std::size_t> set;
        std::string_view rest = line.substr(colon + 1);
        if (rest.find_first_not_of(' ') != std::string_view::npos) {
            std::size_t start = 0;
            for (;;) {
                const auto comma = rest.find(',', start);
                set.push_back(parse_index(rest.substr(start, comma - start)));
                if (comma == std::string_view::npos) break;
                start = comma + 1;
            }
        }
        parents.push_back(std::move(set));
    }
    return parents;
}

}  // namespace mlc
