#include "mcbp/compartment.hpp"

#include <algorithm>
#include <numeric>

namespace mcbp {

namespace {

struct SearchState {
    const Instance* inst;
    const std::vector<int>* clients;  // sorted by decreasing demand
    std::vector<Milli> load;
    std::vector<std::vector<int>> members;  // client array indices per compartment
    std::vector<int> spec_class;            // compartments with equal spec share a class
    std::vector<int> out;

    bool place(size_t k) {
        const Instance& in = *inst;
        const VehicleType& veh = in.vehicle;
        const int M = veh.num_compartments();
        if (k == clients->size()) return true;
        const int ci = (*clients)[k];
        const Milli q = in.clients[ci].demand;

        for (int m = 0; m < M; ++m) {
            if (!veh.item_compartment[ci][m]) continue;
            if (load[m] + q > veh.compartments[m].capacity) continue;
            if (veh.compartments[m].client_cap >= 0 &&
                static_cast<int>(members[m].size()) >= veh.compartments[m].client_cap)
                continue;
            bool compat = true;
            for (int other : members[m])
                if (!in.item_item[ci][other]) { compat = false; break; }
            if (!compat) continue;
            // Identical compartments with identical content are interchangeable:
            // trying one representative per state is enough.
            bool symmetric_dup = false;
            for (int m2 = 0; m2 < m; ++m2) {
                if (spec_class[m2] == spec_class[m] && load[m2] == load[m] &&
                    members[m2] == members[m] && veh.item_compartment[ci][m2]) {
                    symmetric_dup = true;
                    break;
                }
            }
            if (symmetric_dup) continue;

            load[m] += q;
            members[m].push_back(ci);
            out[k] = m;
            if (place(k + 1)) return true;
            members[m].pop_back();
            load[m] -= q;
        }
        return false;
    }
};

}  // namespace

std::vector<int> compartment_classes(const VehicleType& veh) {
    const int M = veh.num_compartments();
    std::vector<int> cls(M, -1);
    int next = 0;
    for (int m = 0; m < M; ++m) {
        if (cls[m] >= 0) continue;
        cls[m] = next;
        for (int m2 = m + 1; m2 < M; ++m2) {
            if (cls[m2] >= 0) continue;
            if (veh.compartments[m].capacity != veh.compartments[m2].capacity) continue;
            if (veh.compartments[m].client_cap != veh.compartments[m2].client_cap) continue;
            bool same_col = true;
            for (const auto& row : veh.item_compartment)
                if (row[m] != row[m2]) { same_col = false; break; }
            if (same_col) cls[m2] = next;
        }
        ++next;
    }
    return cls;
}

std::optional<std::vector<int>> check_feasible(const AssignmentProblem& p) {
    const Instance& in = *p.inst;
    Milli total = 0;
    for (int ci : p.clients) total += in.clients[ci].demand;
    if (total > in.vehicle.total_capacity) return std::nullopt;

    std::vector<int> order = p.clients;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return in.clients[a].demand > in.clients[b].demand;
    });

    SearchState st;
    st.inst = p.inst;
    st.clients = &order;
    st.load.assign(in.vehicle.num_compartments(), 0);
    st.members.assign(in.vehicle.num_compartments(), {});
    st.spec_class = compartment_classes(in.vehicle);
    st.out.assign(order.size(), -1);
    if (!st.place(0)) return std::nullopt;

    // Map back from demand-sorted order to the caller's order.
    std::vector<int> result(p.clients.size(), -1);
    std::vector<char> used(order.size(), 0);
    for (size_t i = 0; i < p.clients.size(); ++i) {
        for (size_t k = 0; k < order.size(); ++k) {
            if (!used[k] && order[k] == p.clients[i]) {
                result[i] = st.out[k];
                used[k] = 1;
                break;
            }
        }
    }
    return result;
}

std::optional<std::vector<int>> check_route_loading(const Instance& inst,
                                                    const std::vector<int>& visits) {
    AssignmentProblem p;
    p.inst = &inst;
    p.clients.reserve(visits.size());
    for (int v : visits) p.clients.push_back(v - 1);
    return check_feasible(p);
}

bool needs_check(const Instance& inst, const std::vector<int>& visits, Milli kappa) {
    Milli total = 0;
    for (int v : visits) total += inst.clients[v - 1].demand;
    if (total >= inst.vehicle.total_capacity - kappa) return true;

    const int M = inst.vehicle.num_compartments();
    for (int v : visits) {
        const auto& row = inst.vehicle.item_compartment[v - 1];
        for (int m = 0; m < M; ++m)
            if (!row[m]) return true;
    }
    for (size_t a = 0; a < visits.size(); ++a)
        for (size_t b = a + 1; b < visits.size(); ++b)
            if (!inst.item_item[visits[a] - 1][visits[b] - 1]) return true;
    return false;
}

}  // namespace mcbp
