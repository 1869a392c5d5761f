#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "mcbp/model.hpp"

namespace mcbp {

struct RmpColumn {
    Route route;
    Milli cost = 0;
    ClientSet incidence;
};

// One dual price per client; sigma and delta are fixed at zero by definition.
struct DualVector {
    std::vector<double> pi;  // indexed by client array index (node-1), milli units

    double of_node(int node) const {
        return (node >= 1 && node <= static_cast<int>(pi.size())) ? pi[node - 1] : 0.0;
    }
};

// c_r minus the dual prices of the clients the column covers.
double reduced_cost(const RmpColumn& col, const DualVector& duals);

// Deduplicated global route pool. Key is (visits, window choices, break flags);
// the first inserted loading wins, later duplicates are dropped.
class ColumnPool {
  public:
    explicit ColumnPool(int n_clients) : n_clients_(n_clients) {}

    // Returns the pool index of the route; inserted == true when it was new.
    std::pair<int, bool> insert(const Route& r);

    const RmpColumn& operator[](int i) const { return cols_[i]; }
    int size() const { return static_cast<int>(cols_.size()); }
    long generation() const { return generation_; }

    static std::string route_key(const Route& r);

  private:
    int n_clients_;
    std::vector<RmpColumn> cols_;
    std::unordered_map<std::string, int> index_;
    long generation_ = 0;
};

// Restricted master problem over an explicit set of columns: a set-partitioning
// (or set-covering) LP solved by a bounded primal simplex with dense basis
// inverse, Bland's rule fallback on degeneracy streaks, and periodic
// refactorization. Artificial columns keep every node LP feasible.
struct RmpOptions {
    bool covering = true;
    double artificial_cost = 1e9;  // milli units
};

struct RmpSolution {
    double objective = 0.0;           // milli units
    std::vector<double> y;            // per attached route column, attach order
    DualVector duals;
    double max_artificial = 0.0;      // largest primal value among artificials
    long iterations = 0;
};

class RmpSolver {
  public:
    RmpSolver(int n_rows, RmpOptions opt);

    // Attaches a route column; tag is an arbitrary caller id (pool index).
    void add_column(double cost, const ClientSet& incidence, int tag);
    int num_route_columns() const { return static_cast<int>(tags_.size()); }
    int tag_of(int attach_index) const { return tags_[attach_index]; }

    // Optimizes from the current basis (first call starts on the artificial
    // basis). Later calls warm-start, so adding columns and re-solving is cheap.
    RmpSolution solve();

  private:
    struct Col {
        double cost;
        std::vector<int> rows;
        double coef;  // +1 for routes/artificials, -1 for surplus columns
    };

    void refactorize();
    double reduced_cost_of(int j, const std::vector<double>& pi) const;

    int m_;
    RmpOptions opt_;
    std::vector<Col> cols_;       // artificials, [surplus,] then routes
    std::vector<int> tags_;       // per route column
    int first_route_col_;
    std::vector<int> basis_;      // column id per row
    std::vector<double> inv_b_;   // m x m row-major
    std::vector<double> x_b_;
    long pivots_since_refactor_ = 0;
};

// Convenience wrapper used by the search drivers: solve the RMP restricted to
// `active` pool columns. Output y is aligned with `active`.
struct RmpRun {
    double objective = 0.0;
    std::vector<double> y;
    DualVector duals;
    bool feasible = true;  // false iff an artificial stays basic at positive level
};

RmpRun solve_rmp(const Instance& inst, const ColumnPool& pool, const std::vector<int>& active,
                 bool covering);

// Always-feasible warm start: prohibitively expensive singleton cover per client.
double artificial_cost_for(const Instance& inst);

}  // namespace mcbp
