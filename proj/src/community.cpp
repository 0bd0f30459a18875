#include "newsgraph/community.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>

#include "json.hpp"

#include "newsgraph/error.hpp"

namespace newsgraph {
namespace {

// Minimum relative gain for accepting a move. Keeps every accepted move a
// strict modularity improvement despite float noise, which is what makes
// the per-phase modularity trace non-decreasing and the algorithms
// terminate.
constexpr double kMinGain = 1e-12;

// Working graph for the move/aggregate cycle. Unlike SimilarityGraph it
// carries self-loops: loop[v] is the full diagonal mass A_vv, so
// strength[v] = loop[v] + sum of incident edge weights, and
// two_m = sum strength counts every ordered node pair once.
struct MoveGraph {
    std::vector<std::vector<std::pair<int, double>>> adj;  // no self entries
    std::vector<double> loop;
    std::vector<double> strength;
    double two_m = 0.0;

    int n() const { return static_cast<int>(adj.size()); }

    void finalize() {
        strength.assign(adj.size(), 0.0);
        two_m = 0.0;
        for (std::size_t v = 0; v < adj.size(); ++v) {
            std::sort(adj[v].begin(), adj[v].end());
            double s = loop[v];
            for (const auto& [u, w] : adj[v]) {
                (void)u;
                s += w;
            }
            strength[v] = s;
            two_m += s;
        }
    }
};

MoveGraph to_move_graph(const SimilarityGraph& graph) {
    MoveGraph g;
    g.adj.resize(graph.num_nodes());
    g.loop.assign(graph.num_nodes(), 0.0);
    for (const auto& e : graph.edges) {
        g.adj[e.i].emplace_back(static_cast<int>(e.j), e.weight);
        g.adj[e.j].emplace_back(static_cast<int>(e.i), e.weight);
    }
    g.finalize();
    return g;
}

// Remaps community ids to 0..k-1 in order of first appearance; returns k.
int renumber(std::vector<int>& comm) {
    std::vector<int> remap(comm.size(), -1);
    int next = 0;
    for (int& c : comm) {
        if (remap[c] < 0) remap[c] = next++;
        c = remap[c];
    }
    return next;
}

double move_graph_modularity(const MoveGraph& g, const std::vector<int>& comm, int num_comms,
                             double gamma) {
    if (g.two_m <= 0.0) return 0.0;
    std::vector<double> sigma_in(num_comms, 0.0), sigma_tot(num_comms, 0.0);
    for (int v = 0; v < g.n(); ++v) {
        const int c = comm[v];
        sigma_tot[c] += g.strength[v];
        sigma_in[c] += g.loop[v];
        for (const auto& [u, w] : g.adj[v]) {
            if (comm[u] == c) sigma_in[c] += w;  // each intra edge counted from both ends
        }
    }
    double q = 0.0;
    for (int c = 0; c < num_comms; ++c) {
        const double frac = sigma_tot[c] / g.two_m;
        q += sigma_in[c] / g.two_m - gamma * frac * frac;
    }
    return q;
}

// One Louvain phase: full sweeps over a fixed shuffled order until a sweep
// moves nothing. comm must be the singleton partition on entry. A move
// needs a relative gain at least kMinGain above staying; equal-gain
// candidates resolve to the lowest community id.
bool sweep_local_move(const MoveGraph& g, std::vector<int>& comm, std::mt19937_64& rng,
                      double gamma) {
    const int n = g.n();
    std::vector<double> sigma_tot(n, 0.0);
    for (int v = 0; v < n; ++v) sigma_tot[comm[v]] += g.strength[v];

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<double> weight_to(n, 0.0);
    std::vector<char> touched_flag(n, 0);
    std::vector<int> touched;
    bool any_move = false;
    for (bool moved = true; moved;) {
        moved = false;
        for (const int v : order) {
            const int old_c = comm[v];
            touched.clear();
            const auto touch = [&](int c) {
                if (!touched_flag[c]) {
                    touched_flag[c] = 1;
                    touched.push_back(c);
                    weight_to[c] = 0.0;
                }
            };
            touch(old_c);
            for (const auto& [u, w] : g.adj[v]) {
                touch(comm[u]);
                weight_to[comm[u]] += w;
            }
            sigma_tot[old_c] -= g.strength[v];
            std::sort(touched.begin(), touched.end());

            const double scale = gamma * g.strength[v] / g.two_m;
            int best_c = old_c;
            double best_gain = weight_to[old_c] - scale * sigma_tot[old_c];
            for (const int c : touched) {
                if (c == old_c) continue;
                const double gain = weight_to[c] - scale * sigma_tot[c];
                if (gain > best_gain + kMinGain) {
                    best_gain = gain;
                    best_c = c;
                }
            }
            sigma_tot[best_c] += g.strength[v];
            comm[v] = best_c;
            if (best_c != old_c) moved = any_move = true;
            for (const int c : touched) touched_flag[c] = 0;
        }
    }
    return any_move;
}

// Leiden's fast local move: nodes wait in a queue and are revisited only
// when a neighbor changed community. comm may start from any partition;
// vacated ids go to a free list so ids stay below n. A node may also move
// to a fresh empty community when that strictly beats every occupied
// candidate.
bool queue_local_move(const MoveGraph& g, std::vector<int>& comm, std::mt19937_64& rng,
                      double gamma) {
    const int n = g.n();
    std::vector<double> sigma_tot(n, 0.0);
    std::vector<int> size(n, 0);
    for (int v = 0; v < n; ++v) {
        sigma_tot[comm[v]] += g.strength[v];
        ++size[comm[v]];
    }
    std::vector<int> free_ids;
    for (int c = n - 1; c >= 0; --c) {
        if (size[c] == 0) free_ids.push_back(c);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::deque<int> queue(order.begin(), order.end());
    std::vector<char> queued(n, 1);

    std::vector<double> weight_to(n, 0.0);
    std::vector<char> touched_flag(n, 0);
    std::vector<int> touched;
    bool any_move = false;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        queued[v] = 0;

        const int old_c = comm[v];
        touched.clear();
        const auto touch = [&](int c) {
            if (!touched_flag[c]) {
                touched_flag[c] = 1;
                touched.push_back(c);
                weight_to[c] = 0.0;
            }
        };
        touch(old_c);
        for (const auto& [u, w] : g.adj[v]) {
            touch(comm[u]);
            weight_to[comm[u]] += w;
        }
        sigma_tot[old_c] -= g.strength[v];
        --size[old_c];
        std::sort(touched.begin(), touched.end());

        const double scale = gamma * g.strength[v] / g.two_m;
        int best_c = old_c;
        double best_gain = weight_to[old_c] - scale * sigma_tot[old_c];
        for (const int c : touched) {
            if (c == old_c) continue;
            const double gain = weight_to[c] - scale * sigma_tot[c];
            if (gain > best_gain + kMinGain) {
                best_gain = gain;
                best_c = c;
            }
        }
        // An empty community has gain exactly 0.
        if (0.0 > best_gain + kMinGain && !free_ids.empty()) {
            best_c = free_ids.back();
            free_ids.pop_back();
            best_gain = 0.0;
        }

        sigma_tot[best_c] += g.strength[v];
        ++size[best_c];
        comm[v] = best_c;
        for (const int c : touched) touched_flag[c] = 0;
        if (best_c == old_c) continue;

        any_move = true;
        if (size[old_c] == 0) free_ids.push_back(old_c);
        for (const auto& [u, w] : g.adj[v]) {
            (void)w;
            if (comm[u] != best_c && !queued[u]) {
                queued[u] = 1;
                queue.push_back(u);
            }
        }
    }
    return any_move;
}

// Refinement phase: inside each community of p, greedily merge
// well-connected singleton nodes into well-connected refined communities.
// A merge needs strictly positive gain, hence an edge into the target, so
// every refined community induces a connected subgraph.
std::vector<int> refine_partition(const MoveGraph& g, const std::vector<int>& p,
                                  std::mt19937_64& rng, double gamma, int& num_refined) {
    const int n = g.n();
    std::vector<int> refined(n);
    std::iota(refined.begin(), refined.end(), 0);

    std::vector<double> vol_p(n, 0.0);
    for (int v = 0; v < n; ++v) vol_p[p[v]] += g.strength[v];

    std::vector<double> vol_ref(g.strength);
    std::vector<double> cut_ref(n, 0.0);  // cut(refined community, rest of its p community)
    for (int v = 0; v < n; ++v) {
        for (const auto& [u, w] : g.adj[v]) {
            if (p[u] == p[v]) cut_ref[v] += w;
        }
    }
    std::vector<char> is_singleton(n, 1);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<double> weight_to(n, 0.0);
    std::vector<char> touched_flag(n, 0);
    std::vector<int> touched;
    for (const int v : order) {
        if (!is_singleton[refined[v]]) continue;
        const int s = p[v];
        const double kv = g.strength[v];
        if (cut_ref[v] < gamma * kv * (vol_p[s] - kv) / g.two_m) continue;

        touched.clear();
        for (const auto& [u, w] : g.adj[v]) {
            if (p[u] != s) continue;
            const int c = refined[u];
            if (!touched_flag[c]) {
                touched_flag[c] = 1;
                touched.push_back(c);
                weight_to[c] = 0.0;
            }
            weight_to[c] += w;
        }
        std::sort(touched.begin(), touched.end());

        int best_c = -1;
        double best_gain = 0.0;
        for (const int c : touched) {
            if (cut_ref[c] < gamma * vol_ref[c] * (vol_p[s] - vol_ref[c]) / g.two_m) continue;
            const double gain = weight_to[c] - gamma * vol_ref[c] * kv / g.two_m;
            if (gain > best_gain + kMinGain) {
                best_gain = gain;
                best_c = c;
            }
        }
        if (best_c >= 0) {
            refined[v] = best_c;
            is_singleton[best_c] = 0;
            is_singleton[v] = 0;
            cut_ref[best_c] += cut_ref[v] - 2.0 * weight_to[best_c];
            vol_ref[best_c] += kv;
        }
        for (const int c : touched) touched_flag[c] = 0;
    }
    num_refined = renumber(refined);
    return refined;
}

MoveGraph aggregate(const MoveGraph& g, const std::vector<int>& comm, int num_comms) {
    std::vector<std::vector<int>> members(num_comms);
    for (int v = 0; v < g.n(); ++v) members[comm[v]].push_back(v);

    MoveGraph a;
    a.adj.resize(num_comms);
    a.loop.assign(num_comms, 0.0);
    std::vector<double> acc(num_comms, 0.0);
    std::vector<char> acc_flag(num_comms, 0);
    std::vector<int> touched;
    for (int c = 0; c < num_comms; ++c) {
        double loop = 0.0;
        touched.clear();
        for (const int v : members[c]) {
            loop += g.loop[v];
            for (const auto& [u, w] : g.adj[v]) {
                const int cu = comm[u];
                if (cu == c) {
                    loop += w;  // both endpoints contribute, giving the full 2w
                } else {
                    if (!acc_flag[cu]) {
                        acc_flag[cu] = 1;
                        touched.push_back(cu);
                        acc[cu] = 0.0;
                    }
                    acc[cu] += w;
                }
            }
        }
        a.loop[c] = loop;
        std::sort(touched.begin(), touched.end());
        for (const int cu : touched) {
            a.adj[c].emplace_back(cu, acc[cu]);
            acc_flag[cu] = 0;
        }
    }
    a.finalize();
    return a;
}

// Splits every community into the connected components it induces on the
// original graph. Never decreases modularity: intra mass is unchanged and
// the squared-volume penalty only shrinks. Needed because a Leiden level
// that ends with an all-singleton refinement can leave a community the
// later local moves never got to reconnect.
void split_components(const SimilarityGraph& graph, std::vector<int>& assignment) {
    const std::size_t n = graph.num_nodes();
    std::vector<int> label(n, -1);
    int next = 0;
    std::vector<std::size_t> stack;
    for (std::size_t v = 0; v < n; ++v) {
        if (label[v] >= 0) continue;
        const int id = next++;
        label[v] = id;
        stack.assign(1, v);
        while (!stack.empty()) {
            const std::size_t x = stack.back();
            stack.pop_back();
            for (const auto& [u, w] : graph.adjacency[x]) {
                (void)w;
                if (label[u] < 0 && assignment[u] == assignment[v]) {
                    label[u] = id;
                    stack.push_back(u);
                }
            }
        }
    }
    assignment = std::move(label);
}

void validate_partition(const SimilarityGraph& graph, const Partition& partition) {
    if (partition.assignment.size() != graph.num_nodes()) {
        throw Error("partition covers " + std::to_string(partition.assignment.size()) +
                    " nodes but graph has " + std::to_string(graph.num_nodes()));
    }
    for (const int c : partition.assignment) {
        if (c < 0 || c >= partition.num_communities) {
            throw Error("community id " + std::to_string(c) + " outside [0, " +
                        std::to_string(partition.num_communities) + ")");
        }
    }
}

void validate_resolution(double resolution) {
    if (resolution <= 0.0) {
        throw Error("resolution must be positive, got " + std::to_string(resolution));
    }
}

}  // namespace

Partition singleton_partition(std::size_t num_nodes) {
    Partition p;
    p.assignment.resize(num_nodes);
    std::iota(p.assignment.begin(), p.assignment.end(), 0);
    p.num_communities = static_cast<int>(num_nodes);
    return p;
}

double modularity(const SimilarityGraph& graph, const Partition& partition, double resolution) {
    validate_resolution(resolution);
    validate_partition(graph, partition);
    const MoveGraph g = to_move_graph(graph);
    return move_graph_modularity(g, partition.assignment, partition.num_communities, resolution);
}

Partition louvain(const SimilarityGraph& graph, std::uint64_t seed, double resolution,
                  LouvainTrace* trace) {
    validate_resolution(resolution);
    Partition result;
    result.seed = seed;
    const int n0 = static_cast<int>(graph.num_nodes());
    if (n0 == 0) return result;

    const MoveGraph base = to_move_graph(graph);
    MoveGraph level = base;
    std::mt19937_64 rng(seed);
    std::vector<int> flat(n0);
    std::iota(flat.begin(), flat.end(), 0);

    while (true) {
        std::vector<int> comm(level.n());
        std::iota(comm.begin(), comm.end(), 0);
        const bool moved = level.two_m > 0.0 && sweep_local_move(level, comm, rng, resolution);
        const int k = renumber(comm);
        if (trace) {
            std::vector<int> on_base(n0);
            for (int v = 0; v < n0; ++v) on_base[v] = comm[flat[v]];
            trace->phase_modularity.push_back(
                move_graph_modularity(base, on_base, k, resolution));
        }
        if (!moved) break;
        for (int v = 0; v < n0; ++v) flat[v] = comm[flat[v]];
        if (k == level.n()) break;
        level = aggregate(level, comm, k);
    }
    result.assignment = std::move(flat);
    result.num_communities = renumber(result.assignment);
    return result;
}

Partition leiden(const SimilarityGraph& graph, std::uint64_t seed, double resolution) {
    validate_resolution(resolution);
    Partition result;
    result.seed = seed;
    const int n0 = static_cast<int>(graph.num_nodes());
    if (n0 == 0) return result;

    MoveGraph level = to_move_graph(graph);
    std::mt19937_64 rng(seed);
    std::vector<int> flat(n0);
    std::iota(flat.begin(), flat.end(), 0);
    std::vector<int> p(level.n());
    std::iota(p.begin(), p.end(), 0);

    while (level.two_m > 0.0) {
        queue_local_move(level, p, rng, resolution);
        const int num_p = renumber(p);
        if (num_p == level.n()) break;

        int num_refined = 0;
        const std::vector<int> refined = refine_partition(level, p, rng, resolution, num_refined);
        if (num_refined == level.n()) break;

        // The aggregate starts from the unrefined partition: refined
        // communities inherit the p community of their members.
        std::vector<int> next_p(num_refined);
        for (int v = 0; v < level.n(); ++v) next_p[refined[v]] = p[v];
        level = aggregate(level, refined, num_refined);
        for (int v = 0; v < n0; ++v) flat[v] = refined[flat[v]];
        p = std::move(next_p);
    }

    result.assignment.resize(n0);
    for (int v = 0; v < n0; ++v) result.assignment[v] = p[flat[v]];
    split_components(graph, result.assignment);
    result.num_communities = renumber(result.assignment);
    return result;
}

PartitionMetrics partition_metrics(const SimilarityGraph& graph, const Partition& partition,
                                   double resolution) {
    validate_resolution(resolution);
    validate_partition(graph, partition);
    PartitionMetrics m;
    m.modularity_q = modularity(graph, partition, resolution);
    m.num_communities = partition.num_communities;

    const std::size_t n = graph.num_nodes();
    std::vector<std::size_t> sizes(partition.num_communities, 0);
    for (const int c : partition.assignment) ++sizes[c];
    for (const std::size_t s : sizes) {
        m.largest_community = std::max<int>(m.largest_community, static_cast<int>(s));
    }
    m.average_community_size =
        partition.num_communities == 0
            ? 0.0
            : static_cast<double>(n) / static_cast<double>(partition.num_communities);

    std::size_t intra_edges = 0;
    for (const auto& e : graph.edges) {
        if (partition.assignment[e.i] == partition.assignment[e.j]) ++intra_edges;
    }
    m.coverage = graph.num_edges() == 0
                     ? 1.0
                     : static_cast<double>(intra_edges) / static_cast<double>(graph.num_edges());

    const std::size_t total_pairs = n * (n - 1) / 2;
    if (total_pairs == 0) {
        m.performance = 1.0;
    } else {
        std::size_t intra_pairs = 0;
        for (const std::size_t s : sizes) intra_pairs += s * (s - 1) / 2;
        const std::size_t inter_pairs = total_pairs - intra_pairs;
        const std::size_t inter_edges = graph.num_edges() - intra_edges;
        m.performance = static_cast<double>(intra_edges + (inter_pairs - inter_edges)) /
                        static_cast<double>(total_pairs);
    }
    return m;
}

std::string partition_to_json_string(const SimilarityGraph& graph, const Partition& partition,
                                     const std::string& method, double resolution) {
    const PartitionMetrics m = partition_metrics(graph, partition, resolution);
    nlohmann::json j;
    j["method"] = method;
    j["resolution"] = resolution;
    j["seed"] = partition.seed;
    j["num_communities"] = partition.num_communities;
    auto& assignment = j["assignment"] = nlohmann::json::object();
    for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
        assignment[graph.node_ids[v]] = partition.assignment[v];
    }
    j["metrics"] = {{"modularity", m.modularity_q},
                    {"coverage", m.coverage},
                    {"performance", m.performance},
                    {"number_of_communities", m.num_communities},
                    {"largest_community", m.largest_community},
                    {"average_community_size", m.average_community_size}};
    return j.dump(2);
}

}  // namespace newsgraph
