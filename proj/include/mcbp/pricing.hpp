#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mcbp/branch.hpp"
#include "mcbp/lp.hpp"
#include "mcbp/model.hpp"

namespace mcbp {

constexpr int kMaxCompartments = 8;

// One way of extending a label along an arc: which merged window is used at
// the head, which compartment receives the head's load, and whether the
// driver rests before the leg. The window is always the earliest reachable
// one; later windows are dominated because service may start at the window
// opening anyway.
struct ExtensionChoice {
    int window_index = 0;
    int compartment = 0;  // -1 when compartments are tracked as one aggregate
    bool take_break = false;
};

// Partial-path state of the labeling algorithm. Client sets are bitmasks over
// the engine's active-client indices (at most 64 clients per pricing run).
struct Label {
    Milli time = 0;        // accumulated service start time
    Milli work = 0;        // travel + service since the last break
    Milli drive = 0;       // distance since the last break
    Milli total_work = 0;  // horizon-wide travel + service
    double rcost = 0.0;    // accumulated reduced cost, milli units
    std::uint64_t visited = 0;
    std::array<Milli, kMaxCompartments> load{};
    std::array<std::uint64_t, kMaxCompartments> occupants{};
    std::array<std::uint8_t, kMaxCompartments> occ_count{};
    int node = 0;
    int day = 0;
    int parent = -1;
    ExtensionChoice choice;
    bool alive = true;
};

// Reduced-cost graph for one pricing round: arc usability after static
// filtering and branching, plus the dual snapshot the reduced costs use.
struct PricingGraph {
    const Instance* inst = nullptr;
    DualVector duals;
    std::vector<std::uint8_t> enabled;  // (n+2)^2 row-major
    bool infeasible = false;            // forced arcs contradict each other

    bool arc(int i, int j) const {
        return enabled[static_cast<size_t>(i) * inst->num_nodes() + j] != 0;
    }
    double rc(int i, int j) const {
        return static_cast<double>(inst->cost.at(i, j)) - duals.of_node(i);
    }
};

// Static arc usability mask: drops arcs no feasible route can use (joint
// demand above vehicle capacity, no joint loading, head unreachable in time).
std::vector<std::uint8_t> arc_filter(const Instance& inst);

// Combines structure, the static mask and branching decisions. A forced arc
// (i,j) removes competing arcs at its client endpoints; depot endpoints keep
// their other arcs since several routes leave sigma and enter delta.
PricingGraph build_pricing_graph(const Instance& inst, const DualVector& duals,
                                 const BranchState& branch,
                                 const std::vector<std::uint8_t>& static_mask);

enum class CompartmentMode { Exact, Relaxed };
enum class DominanceMode { Both, SameDayOnly, Off };

struct EpsTolerances {
    Milli time = 0;
    double cost = 0.0;
    Milli work = 0;
    Milli drive = 0;
};

struct PricingOptions {
    CompartmentMode compartments = CompartmentMode::Exact;
    DominanceMode dominance = DominanceMode::Both;
    bool aggressive = false;  // epsilon-relaxed dominance for speed, not exactness
    EpsTolerances eps;
    int max_columns = 200;
    long max_labels = 2'000'000;
    double rc_accept = -1e-3;  // milli units; emit routes below this reduced cost
    // Stop the search once this many improving terminal labels exist (0 = run
    // to completion). Used by the heuristic lane; a truncated run proves
    // nothing, which the caller must account for.
    long stop_after_negatives = 0;
};

struct PricedRoute {
    Route route;
    double rcost = 0.0;
    bool loading_known = false;  // false for aggregate-compartment candidates
};

struct PricingResult {
    std::vector<PricedRoute> routes;  // ascending reduced cost, truncated
    double min_rcost = std::numeric_limits<double>::infinity();
    long labels_created = 0;
    bool label_cap_hit = false;
    bool truncated = false;  // early exit; the minimum is not proven
};

// Exact dominance within one day: all resources at least as good.
bool dominates_same_day(const Label& a, const Label& b, int m_eff, bool compare_total_work);
// Cross-day dominance: the earlier-day label needs a full break of slack in
// time; daily work/drive are not compared because the break resets them.
bool dominates_inter_day(const Label& a, const Label& b, int m_eff, Milli break_len,
                         bool compare_total_work);
// Epsilon-relaxed variants used in the aggressive phase.
bool dominates_aggressive(const Label& a, const Label& b, int m_eff, const EpsTolerances& eps,
                          bool compare_total_work);
bool dominates_aggressive_inter_day(const Label& a, const Label& b, int m_eff, Milli break_len,
                                    const EpsTolerances& eps, bool compare_total_work);

// Label-setting solver over an active client subset (all clients for the exact
// algorithm, one cluster for rolling-space pricing).
class PricingEngine {
  public:
    PricingEngine(const Instance& inst, const PricingGraph& graph, std::vector<int> active_clients,
                  PricingOptions opt);

    Label root() const;

    struct ExtendOutcome {
        bool feasible = false;
        Label label;
        const char* reject = nullptr;  // first violated condition, diagnostics only
    };
    ExtendOutcome extend(const Label& from, int to_node, const ExtensionChoice& choice) const;

    // Feasible extension choices along (from.node, to_node): per break flag the
    // earliest reachable window and, in exact mode, each feasible compartment
    // with identical twins collapsed to the smallest index.
    std::vector<ExtensionChoice> enumerate_extensions(const Label& from, int to_node) const;

    PricingResult run();

    int active_index_of(int node) const { return loc_[node]; }
    const std::vector<int>& active_clients() const { return active_; }

  private:
    // Buckets are kept sorted by label time so dominance scans touch only the
    // time range a rule can apply to. Dead entries are compacted lazily.
    struct Bucket {
        std::vector<std::pair<Milli, int>> entries;  // (time, label id)
        int dead = 0;
    };

    bool dominated_by_existing(const Label& l);
    void kill_dominated(const Label& l);
    void insert_into_bucket(Bucket& b, Milli time, int id);
    void compact(Bucket& b);

    const Instance& inst_;
    const PricingGraph& graph_;
    std::vector<int> active_;  // client node ids
    std::vector<int> loc_;     // node -> active index or -1
    PricingOptions opt_;
    int m_eff_;
    bool compare_total_work_;
    std::vector<int> comp_class_;

    std::vector<Label> labels_;
    // buckets[active client slot][day]; destination-depot labels are terminal
    // and tracked separately without dominance.
    std::vector<std::vector<Bucket>> buckets_;
    int slot_of(int node) const;
};

PricingResult solve_pricing(const Instance& inst, const PricingGraph& graph,
                            const std::vector<int>& active_clients, const PricingOptions& opt);

}  // namespace mcbp
