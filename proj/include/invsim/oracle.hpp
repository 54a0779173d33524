#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "invsim/graph.hpp"
#include "invsim/inv_sim.hpp"

// Brute-force reference implementations and a synthetic-instance generator.
// Everything here is test-path code: it favours obviousness over speed and
// deliberately shares no traversal logic with the engine modules.
namespace invsim::oracle {

/// Deterministic random source. Wraps std::mt19937_64 (whose output sequence
/// is fixed by the standard) and maps to ranges itself, because the standard
/// distributions are not required to be reproducible across libraries.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased uniform draw from [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n);

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

    // True with probability p (53-bit resolution).
    bool chance(double p);

    template <class T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[index(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

enum class SizeGuard { enforce, bypass };

// Reference dual simulation: full label-compatible candidate sets, then
// repeated deletion of one violating pair at a time in seeded-random order,
// until none violates (the fixpoint is unique, so the order is irrelevant).
// Guard rail: |V_Q| <= 8 and |V_G| <= 64, else PreconditionError.
MatchRelation naive_dual_sim(const QueryGraph& q, const LabeledGraph& g, std::uint64_t seed);

// Reference investigative matching: for every QF query node and every
// label-compatible data node, enumerate ALL directed walks of length 1 to
// hop_bound in both graphs independently, cross-test every pair for
// positionwise label equality, keep the minimal witness per member, then
// apply the survive-iff-IND/RF-member rule. Returns survivors sorted by
// anchor. The guard (|V_Q| <= 8, |V_G| <= 64) can be bypassed for explicit
// large-scale invocations.
std::vector<RelevantSet> exhaustive_partial_search(const QueryGraph& q, const LabeledGraph& g,
                                                   std::size_t hop_bound,
                                                   SizeGuard guard = SizeGuard::enforce);

/// One schema layer of a generated instance. Layers form a chain: layer i+1
/// nodes each get one parent edge from a layer i node.
struct LayerSpec {
    std::string label;
    Category category = Category::NC;
    std::size_t count = 0;
    bool one_per_parent = false;  // parents are drawn without replacement
};

/// One shared tag node attached to last-layer nodes with a fixed probability.
struct TagSpec {
    std::string label;
    Category category = Category::NC;
    double attach_prob = 0.0;
};

/// Deterministic synthetic-instance description. Identical specs generate
/// identical instances byte for byte.
struct GenSpec {
    std::uint64_t seed = 1;
    std::size_t hop_bound = 2;
    std::vector<LayerSpec> layers;  // exactly one layer has category QF
    std::vector<TagSpec> tags;      // at most 60
    std::size_t noise_tags = 0;     // extra uniquely-labeled tag nodes
    // Exact total of last-layer→tag edges; the difference between this and
    // the probabilistically drawn tag attachments is topped up with edges to
    // noise tags. Absent = no top-up.
    std::optional<std::size_t> attachment_edges;
    std::size_t friend_edges = 0;  // random first-layer→first-layer edges, labeled "friend"
    std::size_t planted_full = 0;  // anchors constructed to be exactly the full matches
    bool summary_truth = false;    // emit counts instead of per-anchor truth
};

struct TruthMember {
    std::string query_id;
    std::string data_id;
    std::vector<std::string> witness_query;
    std::vector<std::string> witness_data;

    bool operator==(const TruthMember&) const = default;
};

struct TruthAnchor {
    std::string query_id;
    std::string data_id;
    bool full_match = false;
    bool has_red_flag = false;
    std::vector<TruthMember> members;  // sorted by (query_id, data_id)

    bool operator==(const TruthAnchor&) const = default;
};

/// Expected results derived from generator bookkeeping (never from the
/// engine): every anchor with its exact relevant set, or count summaries when
/// summary_truth is set.
struct GroundTruth {
    std::size_t hop_bound = 2;
    std::string qf_query_node;
    bool summary_only = false;
    std::vector<TruthAnchor> anchors;  // empty in summary mode
    std::size_t anchor_count = 0;
    std::size_t survivor_count = 0;
    std::size_t member_pair_total = 0;
    std::vector<std::string> full_match_ids;  // sorted
};

struct GeneratedInstance {
    LabeledGraph graph;
    QueryGraph query;
    GroundTruth truth;
};

// Rejects inconsistent specs (no QF layer, duplicate labels, counts that
// cannot be satisfied) with a message naming the field.
void validate_genspec(const GenSpec& spec);

GeneratedInstance generate_graph(const GenSpec& spec);

GenSpec load_genspec(const std::filesystem::path& path);
std::string serialize_genspec(const GenSpec& spec);
void save_genspec(const GenSpec& spec, const std::filesystem::path& path);

GroundTruth load_ground_truth(const std::filesystem::path& path);
std::string serialize_ground_truth(const GroundTruth& truth);
void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path);

}  // namespace invsim::oracle
