#include "mcbp/pricing.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

#include "mcbp/compartment.hpp"

namespace mcbp {

std::vector<std::uint8_t> arc_filter(const Instance& inst) {
    const int nodes = inst.num_nodes();
    const int n = inst.num_clients();
    std::vector<std::uint8_t> mask(static_cast<size_t>(nodes) * nodes, 1);

    auto disable = [&](int i, int j) { mask[static_cast<size_t>(i) * nodes + j] = 0; };

    for (int j = 1; j <= n; ++j) {
        const Client& cj = inst.clients[j - 1];
        // sigma -> j: the singleton prefix must be loadable and reachable.
        if (cj.demand > inst.vehicle.total_capacity || inst.time.at(0, j) > cj.windows.back().end ||
            !check_route_loading(inst, {j}))
            disable(inst.sigma(), j);
    }
    for (int i = 1; i <= n; ++i) {
        const Client& ci = inst.clients[i - 1];
        for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            const Client& cj = inst.clients[j - 1];
            if (ci.demand + cj.demand > inst.vehicle.total_capacity) {
                disable(i, j);
                continue;
            }
            // Breaks and waiting only delay the arrival, so the earliest
            // possible departure from i already decides reachability of j.
            if (ci.windows.front().start + ci.service_time + inst.time.at(i, j) >
                cj.windows.back().end) {
                disable(i, j);
                continue;
            }
            if (!check_route_loading(inst, {i, j})) disable(i, j);
        }
    }
    return mask;
}

PricingGraph build_pricing_graph(const Instance& inst, const DualVector& duals,
                                 const BranchState& branch,
                                 const std::vector<std::uint8_t>& static_mask) {
    const int nodes = inst.num_nodes();
    PricingGraph g;
    g.inst = &inst;
    g.duals = duals;
    g.enabled = static_mask.empty()
                    ? std::vector<std::uint8_t>(static_cast<size_t>(nodes) * nodes, 1)
                    : static_mask;

    auto& en = g.enabled;
    auto off = [&](int i, int j) { en[static_cast<size_t>(i) * nodes + j] = 0; };

    for (int i = 0; i < nodes; ++i) {
        off(i, inst.sigma());   // no arc into sigma
        off(inst.delta(), i);   // no arc out of delta
        off(i, i);
    }

    for (const Arc& a : branch.forbidden) off(a.first, a.second);

    // Forced arcs: competing arcs are removed at client endpoints only. The
    // depot is shared by every route, so ruling out its other arcs would wrongly
    // constrain vehicles that do not carry the forced arc.
    std::vector<int> forced_out(nodes, -1), forced_in(nodes, -1);
    for (const Arc& a : branch.forced) {
        auto [i, j] = a;
        if ((forced_out[i] >= 0 && forced_out[i] != j) || (forced_in[j] >= 0 && forced_in[j] != i)) {
            g.infeasible = true;
            return g;
        }
        forced_out[i] = j;
        forced_in[j] = i;
        if (inst.is_client_node(i))
            for (int k = 0; k < nodes; ++k)
                if (k != j) off(i, k);
        if (inst.is_client_node(j))
            for (int k = 0; k < nodes; ++k)
                if (k != i) off(k, j);
    }
    // A cycle of forced arcs cannot be part of an elementary route.
    for (const Arc& a : branch.forced) {
        int steps = 0;
        int cur = a.second;
        while (cur >= 0 && steps++ <= nodes) {
            if (cur == a.first) {
                g.infeasible = true;
                return g;
            }
            cur = forced_out[cur];
        }
    }
    return g;
}

namespace {

inline bool subset64(std::uint64_t a, std::uint64_t b) { return (a & ~b) == 0; }

}  // namespace

bool dominates_same_day(const Label& a, const Label& b, int m_eff, bool compare_total_work) {
    if (a.node != b.node || a.day != b.day) return false;
    if (a.time > b.time || a.rcost > b.rcost) return false;
    if (!subset64(a.visited, b.visited)) return false;
    for (int m = 0; m < m_eff; ++m) {
        if (a.load[m] > b.load[m]) return false;
        if (!subset64(a.occupants[m], b.occupants[m])) return false;
    }
    if (a.work > b.work || a.drive > b.drive) return false;
    if (compare_total_work && a.total_work > b.total_work) return false;
    return true;
}

bool dominates_inter_day(const Label& a, const Label& b, int m_eff, Milli break_len,
                         bool compare_total_work) {
    if (a.node != b.node || a.day >= b.day) return false;
    if (a.time > b.time - break_len) return false;
    if (a.rcost > b.rcost) return false;
    if (!subset64(a.visited, b.visited)) return false;
    for (int m = 0; m < m_eff; ++m) {
        if (a.load[m] > b.load[m]) return false;
        if (!subset64(a.occupants[m], b.occupants[m])) return false;
    }
    // Daily work and drive are not compared: the catch-up break resets both.
    if (compare_total_work && a.total_work > b.total_work) return false;
    return true;
}

bool dominates_aggressive(const Label& a, const Label& b, int m_eff, const EpsTolerances& eps,
                          bool compare_total_work) {
    if (a.node != b.node || a.day != b.day) return false;
    if (a.time > b.time + eps.time || a.rcost > b.rcost + eps.cost) return false;
    if (!subset64(a.visited, b.visited)) return false;
    for (int m = 0; m < m_eff; ++m) {
        if (a.load[m] > b.load[m]) return false;
        if (!subset64(a.occupants[m], b.occupants[m])) return false;
    }
    if (a.work > b.work + eps.work || a.drive > b.drive + eps.drive) return false;
    if (compare_total_work && a.total_work > b.total_work + eps.work) return false;
    return true;
}

bool dominates_aggressive_inter_day(const Label& a, const Label& b, int m_eff, Milli break_len,
                                    const EpsTolerances& eps, bool compare_total_work) {
    if (a.node != b.node || a.day >= b.day) return false;
    if (a.time > b.time - break_len + eps.time) return false;
    if (a.rcost > b.rcost + eps.cost) return false;
    if (!subset64(a.visited, b.visited)) return false;
    for (int m = 0; m < m_eff; ++m) {
        if (a.load[m] > b.load[m]) return false;
        if (!subset64(a.occupants[m], b.occupants[m])) return false;
    }
    if (compare_total_work && a.total_work > b.total_work + eps.work) return false;
    return true;
}

PricingEngine::PricingEngine(const Instance& inst, const PricingGraph& graph,
                             std::vector<int> active_clients, PricingOptions opt)
    : inst_(inst), graph_(graph), active_(std::move(active_clients)), opt_(opt) {
    if (active_.size() > 64)
        throw std::invalid_argument("pricing handles at most 64 active clients");
    if (inst.vehicle.num_compartments() > kMaxCompartments)
        throw std::invalid_argument("pricing handles at most 8 compartments");
    loc_.assign(inst.num_nodes(), -1);
    for (size_t k = 0; k < active_.size(); ++k) loc_[active_[k]] = static_cast<int>(k);
    m_eff_ = opt_.compartments == CompartmentMode::Relaxed ? 1 : inst.vehicle.num_compartments();
    compare_total_work_ = inst.rules.max_total_work >= 0;
    comp_class_ = compartment_classes(inst.vehicle);
    buckets_.assign(active_.size() + 2,
                    std::vector<Bucket>(std::max(1, inst.rules.horizon_days)));
}

int PricingEngine::slot_of(int node) const {
    if (node == inst_.sigma()) return 0;
    if (node == inst_.delta()) return static_cast<int>(active_.size()) + 1;
    return loc_[node] + 1;
}

Label PricingEngine::root() const {
    Label l;
    l.node = inst_.sigma();
    l.rcost = static_cast<double>(inst_.vehicle.fixed_cost);
    return l;
}

PricingEngine::ExtendOutcome PricingEngine::extend(const Label& from, int to_node,
                                                   const ExtensionChoice& choice) const {
    ExtendOutcome out;
    const DriverRules& rules = inst_.rules;
    const int i = from.node;
    const bool br = choice.take_break;

    if (br && from.day + 1 > rules.horizon_days - 1) {
        out.reject = "break beyond horizon";
        return out;
    }
    const Milli travel = inst_.time.at(i, to_node);
    const Milli serv = inst_.service_at(i);
    const Milli arrival = from.time + travel + serv + (br ? rules.break_length : 0);
    const Milli inc_work = travel + serv;
    const Milli dist = inst_.distance.at(i, to_node);

    Label l = from;
    l.node = to_node;
    l.day = from.day + (br ? 1 : 0);
    l.rcost = from.rcost + graph_.rc(i, to_node);
    l.work = br ? (rules.count_postbreak_leg ? inc_work : 0) : from.work + inc_work;
    l.drive = br ? (rules.count_postbreak_leg ? dist : 0) : from.drive + dist;
    l.total_work = from.total_work + inc_work;
    l.parent = -1;
    l.choice = choice;
    l.alive = true;

    if (l.work > rules.max_daily_work) {
        out.reject = "daily working time";
        return out;
    }
    if (l.drive > rules.max_daily_distance) {
        out.reject = "daily driving distance";
        return out;
    }
    if (compare_total_work_ && l.total_work > rules.max_total_work) {
        out.reject = "total working time";
        return out;
    }

    if (to_node == inst_.delta()) {
        l.time = arrival;
        out.feasible = true;
        out.label = l;
        return out;
    }

    const Client& cj = inst_.client_at_node(to_node);
    const int jloc = loc_[to_node];
    if (jloc < 0) {
        out.reject = "client not in active set";
        return out;
    }
    if ((from.visited >> jloc) & 1ULL) {
        out.reject = "revisit";
        return out;
    }

    int earliest = -1;
    for (size_t w = 0; w < cj.windows.size(); ++w)
        if (arrival <= cj.windows[w].end) { earliest = static_cast<int>(w); break; }
    if (earliest < 0) {
        out.reject = "time window";
        return out;
    }
    if (choice.window_index != earliest) {
        out.reject = "window is not the earliest reachable";
        return out;
    }
    l.time = std::max(arrival, cj.windows[earliest].start);
    l.visited = from.visited | (1ULL << jloc);

    const Milli q = cj.demand;
    Milli total = q;
    for (int m = 0; m < m_eff_; ++m) total += from.load[m];
    if (total > inst_.vehicle.total_capacity) {
        out.reject = "vehicle capacity";
        return out;
    }

    if (opt_.compartments == CompartmentMode::Relaxed) {
        l.load[0] = from.load[0] + q;
        l.occupants[0] = l.visited;
        l.occ_count[0] = static_cast<std::uint8_t>(from.occ_count[0] + 1);
    } else {
        const int m = choice.compartment;
        if (m < 0 || m >= inst_.vehicle.num_compartments()) {
            out.reject = "bad compartment";
            return out;
        }
        if (!inst_.vehicle.item_compartment[to_node - 1][m]) {
            out.reject = "item-compartment compatibility";
            return out;
        }
        const auto& spec = inst_.vehicle.compartments[m];
        if (from.load[m] + q > spec.capacity) {
            out.reject = "compartment capacity";
            return out;
        }
        if (spec.client_cap >= 0 && from.occ_count[m] + 1 > spec.client_cap) {
            out.reject = "compartment client cap";
            return out;
        }
        std::uint64_t occ = from.occupants[m];
        while (occ) {
            int k = __builtin_ctzll(occ);
            occ &= occ - 1;
            if (!inst_.item_item[to_node - 1][active_[k] - 1]) {
                out.reject = "item-item compatibility";
                return out;
            }
        }
        l.load[m] = from.load[m] + q;
        l.occupants[m] = from.occupants[m] | (1ULL << jloc);
        l.occ_count[m] = static_cast<std::uint8_t>(from.occ_count[m] + 1);
    }

    out.feasible = true;
    out.label = l;
    return out;
}

std::vector<ExtensionChoice> PricingEngine::enumerate_extensions(const Label& from,
                                                                 int to_node) const {
    std::vector<ExtensionChoice> out;
    const DriverRules& rules = inst_.rules;
    const int i = from.node;
    const Milli travel = inst_.time.at(i, to_node);
    const Milli serv = inst_.service_at(i);
    const bool to_delta = to_node == inst_.delta();
    if (!to_delta) {
        const int jloc = loc_[to_node];
        if (jloc < 0 || ((from.visited >> jloc) & 1ULL)) return out;
    }

    int window0 = -1;
    Milli start0 = 0, arrival0 = 0;
    bool feasible0 = false;

    for (int br = 0; br <= 1; ++br) {
        if (br && from.day + 1 > rules.horizon_days - 1) break;
        const Milli arrival = from.time + travel + serv + (br ? rules.break_length : 0);

        Milli inc_work = travel + serv;
        Milli work = br ? (rules.count_postbreak_leg ? inc_work : 0) : from.work + inc_work;
        Milli drive_inc = inst_.distance.at(i, to_node);
        Milli drive = br ? (rules.count_postbreak_leg ? drive_inc : 0) : from.drive + drive_inc;
        bool rules_ok = work <= rules.max_daily_work && drive <= rules.max_daily_distance &&
                        (!compare_total_work_ || from.total_work + inc_work <= rules.max_total_work);

        if (to_delta) {
            // No window at the destination depot; a rested leg is only worth
            // exploring when the same leg breaks the daily limits otherwise.
            if (br == 0) {
                feasible0 = rules_ok;
                if (rules_ok) out.push_back({0, -1, false});
            } else if (!feasible0 && rules_ok) {
                out.push_back({0, -1, true});
            }
            continue;
        }

        const Client& cj = inst_.client_at_node(to_node);
        int earliest = -1;
        for (size_t w = 0; w < cj.windows.size(); ++w)
            if (arrival <= cj.windows[w].end) { earliest = static_cast<int>(w); break; }
        bool window_ok = earliest >= 0;
        Milli start = window_ok ? std::max(arrival, cj.windows[earliest].start) : 0;

        if (br == 0) {
            window0 = window_ok ? earliest : -1;
            start0 = start;
            arrival0 = arrival;
            feasible0 = window_ok && rules_ok;
        } else {
            // The rested variant is dominated by its unrested sibling unless the
            // sibling is infeasible, reaches a different window, or waited at the
            // window opening (waiting absorbs part of the break, so resting now
            // is strictly ahead of resting on a later leg).
            bool keep = !feasible0 || earliest != window0 || start0 > arrival0;
            if (!keep) continue;
        }
        if (!window_ok || !rules_ok) continue;

        const Milli q = cj.demand;
        Milli total = q;
        for (int m = 0; m < m_eff_; ++m) total += from.load[m];
        if (total > inst_.vehicle.total_capacity) continue;

        if (opt_.compartments == CompartmentMode::Relaxed) {
            out.push_back({earliest, -1, br != 0});
            continue;
        }
        const int M = inst_.vehicle.num_compartments();
        for (int m = 0; m < M; ++m) {
            if (!inst_.vehicle.item_compartment[to_node - 1][m]) continue;
            const auto& spec = inst_.vehicle.compartments[m];
            if (from.load[m] + q > spec.capacity) continue;
            if (spec.client_cap >= 0 && from.occ_count[m] + 1 > spec.client_cap) continue;
            bool compat = true;
            std::uint64_t occ = from.occupants[m];
            while (occ) {
                int k = __builtin_ctzll(occ);
                occ &= occ - 1;
                if (!inst_.item_item[to_node - 1][active_[k] - 1]) { compat = false; break; }
            }
            if (!compat) continue;
            // Equally specced, equally loaded compartments are interchangeable;
            // propose only the smallest index of each such group.
            bool dup = false;
            for (int m2 = 0; m2 < m; ++m2)
                if (comp_class_[m2] == comp_class_[m] && from.load[m2] == from.load[m] &&
                    from.occupants[m2] == from.occupants[m]) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            out.push_back({earliest, m, br != 0});
        }
    }
    return out;
}

void PricingEngine::insert_into_bucket(Bucket& b, Milli time, int id) {
    auto it = std::upper_bound(b.entries.begin(), b.entries.end(), std::make_pair(time, id));
    b.entries.insert(it, {time, id});
}

void PricingEngine::compact(Bucket& b) {
    if (b.dead * 2 < static_cast<int>(b.entries.size()) || b.entries.size() < 64) return;
    auto keep = std::remove_if(b.entries.begin(), b.entries.end(),
                               [&](const auto& e) { return !labels_[e.second].alive; });
    b.entries.erase(keep, b.entries.end());
    b.dead = 0;
}

bool PricingEngine::dominated_by_existing(const Label& l) {
    if (opt_.dominance == DominanceMode::Off) return false;
    const int slot = slot_of(l.node);
    auto& per_day = buckets_[slot];
    const Milli B = inst_.rules.break_length;
    const Milli eps_t = opt_.aggressive ? opt_.eps.time : 0;

    // A same-day dominator needs time <= l.time (+ tolerance in the aggressive
    // rule), so only a sorted prefix of the bucket can apply.
    {
        Bucket& b = per_day[l.day];
        compact(b);
        auto end = std::upper_bound(b.entries.begin(), b.entries.end(),
                                    std::make_pair(l.time + eps_t, INT32_MAX));
        for (auto it = b.entries.begin(); it != end; ++it) {
            const Label& o = labels_[it->second];
            if (!o.alive) continue;
            bool dom = opt_.aggressive
                           ? dominates_aggressive(o, l, m_eff_, opt_.eps, compare_total_work_)
                           : dominates_same_day(o, l, m_eff_, compare_total_work_);
            if (dom) return true;
        }
    }
    if (opt_.dominance == DominanceMode::Both) {
        for (int d = 0; d < l.day; ++d) {
            Bucket& b = per_day[d];
            compact(b);
            auto end = std::upper_bound(b.entries.begin(), b.entries.end(),
                                        std::make_pair(l.time - B + eps_t, INT32_MAX));
            for (auto it = b.entries.begin(); it != end; ++it) {
                const Label& o = labels_[it->second];
                if (!o.alive) continue;
                bool dom = opt_.aggressive
                               ? dominates_aggressive_inter_day(o, l, m_eff_, B, opt_.eps,
                                                                compare_total_work_)
                               : dominates_inter_day(o, l, m_eff_, B, compare_total_work_);
                if (dom) return true;
            }
        }
    }
    return false;
}

void PricingEngine::kill_dominated(const Label& l) {
    if (opt_.dominance == DominanceMode::Off) return;
    const int slot = slot_of(l.node);
    auto& per_day = buckets_[slot];
    const Milli B = inst_.rules.break_length;
    const Milli eps_t = opt_.aggressive ? opt_.eps.time : 0;

    {
        Bucket& b = per_day[l.day];
        auto from = std::lower_bound(b.entries.begin(), b.entries.end(),
                                     std::make_pair(l.time - eps_t, INT32_MIN));
        for (auto it = from; it != b.entries.end(); ++it) {
            Label& o = labels_[it->second];
            if (!o.alive) continue;
            bool dom = opt_.aggressive
                           ? dominates_aggressive(l, o, m_eff_, opt_.eps, compare_total_work_)
                           : dominates_same_day(l, o, m_eff_, compare_total_work_);
            if (dom) {
                o.alive = false;
                ++b.dead;
            }
        }
    }
    if (opt_.dominance == DominanceMode::Both) {
        const int days = static_cast<int>(per_day.size());
        for (int d = l.day + 1; d < days; ++d) {
            Bucket& b = per_day[d];
            auto from = std::lower_bound(b.entries.begin(), b.entries.end(),
                                         std::make_pair(l.time + B - eps_t, INT32_MIN));
            for (auto it = from; it != b.entries.end(); ++it) {
                Label& o = labels_[it->second];
                if (!o.alive) continue;
                bool dom = opt_.aggressive
                               ? dominates_aggressive_inter_day(l, o, m_eff_, B, opt_.eps,
                                                                compare_total_work_)
                               : dominates_inter_day(l, o, m_eff_, B, compare_total_work_);
                if (dom) {
                    o.alive = false;
                    ++b.dead;
                }
            }
        }
    }
}

PricingResult PricingEngine::run() {
    PricingResult res;
    labels_.clear();
    for (auto& node_buckets : buckets_)
        for (auto& day_bucket : node_buckets) {
            day_bucket.entries.clear();
            day_bucket.dead = 0;
        }

    using Key = std::tuple<int, Milli, int>;  // (day, time, id)
    std::priority_queue<Key, std::vector<Key>, std::greater<>> pq;

    labels_.push_back(root());
    insert_into_bucket(buckets_[slot_of(inst_.sigma())][0], 0, 0);
    pq.push({0, 0, 0});
    res.labels_created = 1;

    std::vector<int> delta_ids;
    long negatives = 0;

    while (!pq.empty()) {
        if (opt_.stop_after_negatives > 0 && negatives >= opt_.stop_after_negatives) {
            res.truncated = true;
            break;
        }
        auto [day, time, id] = pq.top();
        pq.pop();
        (void)day;
        (void)time;
        if (!labels_[id].alive) continue;
        const Label cur = labels_[id];  // copy: the arena may grow below

        for (size_t k = 0; k <= active_.size(); ++k) {
            const int to = (k == active_.size()) ? inst_.delta() : active_[k];
            if (to != inst_.delta()) {
                if ((cur.visited >> k) & 1ULL) continue;
            } else if (cur.node == inst_.sigma()) {
                continue;  // the empty route serves nobody
            }
            if (!graph_.arc(cur.node, to)) continue;

            for (const ExtensionChoice& choice : enumerate_extensions(cur, to)) {
                ExtendOutcome ext = extend(cur, to, choice);
                if (!ext.feasible) continue;
                ext.label.parent = id;

                const int new_id = static_cast<int>(labels_.size());
                if (to == inst_.delta()) {
                    // terminal labels never extend; no dominance bookkeeping
                    labels_.push_back(ext.label);
                    ++res.labels_created;
                    delta_ids.push_back(new_id);
                    if (ext.label.rcost < opt_.rc_accept) ++negatives;
                    continue;
                }
                if (dominated_by_existing(ext.label)) continue;
                labels_.push_back(ext.label);
                ++res.labels_created;
                kill_dominated(ext.label);
                insert_into_bucket(buckets_[slot_of(to)][ext.label.day], ext.label.time, new_id);
                pq.push({ext.label.day, ext.label.time, new_id});
            }
        }
        if (res.labels_created > opt_.max_labels) {
            res.label_cap_hit = true;
            break;
        }
    }

    // Collect routes at delta: surviving labels, deduplicated per route key.
    std::sort(delta_ids.begin(), delta_ids.end(), [&](int a, int b) {
        if (labels_[a].rcost != labels_[b].rcost) return labels_[a].rcost < labels_[b].rcost;
        return a < b;
    });
    std::unordered_set<std::string> seen;
    for (int id : delta_ids) {
        const Label& l = labels_[id];
        if (!l.alive) continue;
        res.min_rcost = std::min(res.min_rcost, l.rcost);
        if (l.rcost >= opt_.rc_accept) continue;
        if (static_cast<int>(res.routes.size()) >= opt_.max_columns) continue;

        // Reconstruct the path from the parent chain.
        std::vector<int> chain;
        for (int cur = id; cur > 0; cur = labels_[cur].parent) chain.push_back(cur);
        std::reverse(chain.begin(), chain.end());

        Route r;
        r.incidence = ClientSet(inst_.num_clients());
        for (int cid : chain) {
            const Label& step = labels_[cid];
            r.breaks.push_back(step.choice.take_break ? 1 : 0);
            if (step.node == inst_.delta()) break;
            r.visits.push_back(step.node);
            r.schedule.push_back({step.node, step.time, step.choice.window_index, step.day});
            r.loading.push_back(step.choice.compartment);
            r.incidence.set(step.node - 1);
        }
        r.cost = route_cost(inst_, r.visits);
        if (!seen.insert(ColumnPool::route_key(r)).second) continue;

        PricedRoute pr;
        pr.route = std::move(r);
        pr.rcost = l.rcost;
        pr.loading_known = opt_.compartments == CompartmentMode::Exact;
        res.routes.push_back(std::move(pr));
    }
    return res;
}

PricingResult solve_pricing(const Instance& inst, const PricingGraph& graph,
                            const std::vector<int>& active_clients, const PricingOptions& opt) {
    PricingEngine engine(inst, graph, active_clients, opt);
    return engine.run();
}

}  // namespace mcbp
