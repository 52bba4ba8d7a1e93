#include "mcast/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mcast/annealing.hpp"
#include "mcast/exact.hpp"
#include "mcast/heuristics.hpp"

namespace mcast {

namespace {

// Stream derivation tags; changing these changes every simulation output.
constexpr std::uint64_t kPlacementTag = 0xA1;
constexpr std::uint64_t kChannelTag = 0xC2;
constexpr std::uint64_t kGroupingTag = 0x6B;
constexpr std::uint64_t kSaTag = 0x5A;

Grouping build_grouping(const ScenarioConfig& cfg, const std::vector<AverageChannel>& avgs,
                        RngStream stream) {
    switch (cfg.grouping) {
        case GroupingScheme::Fixed:
            return group_fixed_size(avgs, cfg.fixed_group_size);
        case GroupingScheme::Cqi:
            return group_cqi(avgs, cqi_thresholds(cfg.cqi_table()));
        case GroupingScheme::Random:
            return group_random(static_cast<int>(avgs.size()), cfg.random_groups, stream);
        case GroupingScheme::Unicast:
            return group_unicast(static_cast<int>(avgs.size()));
    }
    throw std::logic_error("unknown grouping scheme");
}

struct AllocOutcome {
    bool feasible = false;
    AllocationState state;
};

AllocOutcome run_allocator(const ScenarioConfig& cfg, const RateMatrix& group_rates,
                           RngStream sa_stream) {
    AllocOutcome out;
    switch (cfg.allocator) {
        case AllocatorKind::Greedy: {
            auto state = allocate_greedy(group_rates, cfg.r_req_kbps);
            if (state) {
                out.feasible = true;
                out.state = std::move(*state);
            }
            break;
        }
        case AllocatorKind::Lp: {
            auto frac = solve_lp_relaxation(group_rates, cfg.r_req_kbps);
            if (!frac) break;
            auto state = round_lp(*frac, group_rates, cfg.r_req_kbps);
            if (state) {
                out.feasible = true;
                out.state = std::move(*state);
            }
            break;
        }
        case AllocatorKind::Sa: {
            AnnealParams params;
            params.max_iter = cfg.sa_iters;
            params.rng = sa_stream;
            AnnealOutcome sa = anneal(group_rates, cfg.r_req_kbps, params);
            out.state = std::move(sa.best_state);
            out.feasible = evaluate(out.state, group_rates, cfg.r_req_kbps).feasible();
            break;
        }
        case AllocatorKind::Exact: {
            ExactResult exact = solve_blp_exact(group_rates, cfg.r_req_kbps,
                                                cfg.exact_node_budget);
            if (exact.status == ExactResult::Status::BudgetExceeded)
                throw std::runtime_error("exact allocator exceeded its node budget");
            if (exact.status == ExactResult::Status::Feasible) {
                out.feasible = true;
                out.state = std::move(exact.witness);
            }
            break;
        }
    }
    return out;
}

void run_placement(const ScenarioConfig& cfg, int placement, MetricsRecord* out) {
    const RngStream master(cfg.master_seed);
    const CqiTable& table = cfg.cqi_table();

    const auto ues = place_ues(cfg.n_ues, cfg.cell_radius_km,
                               master.fork(kPlacementTag).fork(placement),
                               cfg.channel.shadowing_sigma_db);
    std::vector<AverageChannel> avgs;
    avgs.reserve(ues.size());
    for (const auto& pos : ues) avgs.push_back(average_snr(pos, cfg.channel));

    const Grouping grouping =
        build_grouping(cfg, avgs, master.fork(kGroupingTag).fork(placement));

    const std::string allocator_label = to_string(cfg.allocator);
    for (int t = 0; t < cfg.n_subframes; ++t) {
        const RateMatrix ue_rates = sample_subframe_rates(
            avgs, cfg.n_prbs, table, master.fork(kChannelTag).fork(placement).fork(t), t);
        const RateMatrix group_rates = group_rate_matrix(grouping, ue_rates);

        const auto t0 = std::chrono::steady_clock::now();
        const AllocOutcome alloc =
            run_allocator(cfg, group_rates, master.fork(kSaTag).fork(placement).fork(t));
        const auto t1 = std::chrono::steady_clock::now();

        MetricsRecord rec;
        rec.placement = placement;
        rec.subframe = t;
        rec.scheme = allocator_label;
        rec.grouping = grouping.label;
        rec.n_ues = cfg.n_ues;
        rec.n_groups = grouping.n_groups();
        if (alloc.feasible) {
            const FeasibilityReport report = evaluate(alloc.state, group_rates, cfg.r_req_kbps);
            if (!report.feasible())
                throw std::logic_error("allocator reported feasible state that is not");
            rec.feasible = true;
            rec.used_prbs = report.used_prbs;
            rec.unused_prbs = report.unused_prbs;
            for (double l : report.group_rates_kbps) rec.sum_rate_kbps += l;
        } else {
            // Best effort: an infeasible subframe leaves nothing to spare.
            rec.feasible = false;
            rec.used_prbs = cfg.n_prbs;
            rec.unused_prbs = 0;
            rec.sum_rate_kbps = 0.0;
        }
        if (cfg.measure_time)
            rec.wall_time_us =
                std::chrono::duration<double, std::micro>(t1 - t0).count();
        out[t] = std::move(rec);
    }
}

void parallel_over_placements(const ScenarioConfig& cfg,
                              const std::function<void(int)>& work) {
    const int n_threads = std::min(resolve_threads(cfg), cfg.n_placements);
    if (n_threads <= 1) {
        for (int p = 0; p < cfg.n_placements; ++p) work(p);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (int w = 0; w < n_threads; ++w) {
        workers.emplace_back([&] {
            while (true) {
                const int p = next.fetch_add(1);
                if (p >= cfg.n_placements) return;
                try {
                    work(p);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<MetricsRecord> run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    std::vector<MetricsRecord> records(static_cast<std::size_t>(cfg.n_placements) *
                                       cfg.n_subframes);
    parallel_over_placements(cfg, [&](int p) {
        run_placement(cfg, p, records.data() + static_cast<std::size_t>(p) * cfg.n_subframes);
    });
    return records;
}

AllocationState pf_allocate(const RateMatrix& unicast_rates,
                            std::vector<double>& throughput_history,
                            const std::vector<char>& reserved_prbs, double epsilon_kbps,
                            double window_subframes) {
    const int n_ues = unicast_rates.rows;
    const int n_prbs = unicast_rates.cols;
    if (static_cast<int>(throughput_history.size()) != n_ues)
        throw std::invalid_argument("pf_allocate: history length mismatch");
    if (static_cast<int>(reserved_prbs.size()) != n_prbs)
        throw std::invalid_argument("pf_allocate: reserved mask length mismatch");

    AllocationState state(n_prbs, n_ues);
    std::vector<double> served(n_ues, 0.0);
    for (int j = 0; j < n_prbs; ++j) {
        if (reserved_prbs[j]) continue;
        int best_u = 0;
        double best_metric = -1.0;
        for (int u = 0; u < n_ues; ++u) {
            const double metric =
                unicast_rates.at(u, j) / std::max(epsilon_kbps, throughput_history[u]);
            if (metric > best_metric) {
                best_metric = metric;
                best_u = u;
            }
        }
        state.owner[j] = best_u + 1;
        served[best_u] += unicast_rates.at(best_u, j);
    }
    const double alpha = 1.0 / window_subframes;
    for (int u = 0; u < n_ues; ++u)
        throughput_history[u] = (1.0 - alpha) * throughput_history[u] + alpha * served[u];
    return state;
}

std::vector<PfComparisonRecord> run_pf_comparison(const ScenarioConfig& cfg) {
    cfg.validate();
    const int total_ues = cfg.n_ues + cfg.pf_unicast_ues;
    std::vector<PfComparisonRecord> records(static_cast<std::size_t>(cfg.n_placements) *
                                            cfg.n_subframes * 2);

    parallel_over_placements(cfg, [&](int p) {
        const RngStream master(cfg.master_seed);
        const CqiTable& table = cfg.cqi_table();

        const auto ues = place_ues(total_ues, cfg.cell_radius_km,
                                   master.fork(kPlacementTag).fork(p),
                                   cfg.channel.shadowing_sigma_db);
        std::vector<AverageChannel> avgs;
        for (const auto& pos : ues) avgs.push_back(average_snr(pos, cfg.channel));
        const std::vector<AverageChannel> mc_avgs(avgs.begin(), avgs.begin() + cfg.n_ues);

        const Grouping grouping =
            build_grouping(cfg, mc_avgs, master.fork(kGroupingTag).fork(p));
        const std::vector<int> group_size = [&] {
            std::vector<int> out;
            for (const auto& g : grouping.groups) out.push_back(static_cast<int>(g.size()));
            return out;
        }();

        std::vector<double> history_a(cfg.pf_unicast_ues, cfg.pf_epsilon_kbps);
        std::vector<double> history_b(total_ues, cfg.pf_epsilon_kbps);

        for (int t = 0; t < cfg.n_subframes; ++t) {
            const RateMatrix all_rates = sample_subframe_rates(
                avgs, cfg.n_prbs, table, master.fork(kChannelTag).fork(p).fork(t), t);

            // Arm A: LP allocation for the groups, PF for unicast leftovers.
            RateMatrix mc_rates(cfg.n_ues, cfg.n_prbs, t);
            for (int u = 0; u < cfg.n_ues; ++u)
                for (int j = 0; j < cfg.n_prbs; ++j) mc_rates.at(u, j) = all_rates.at(u, j);
            const RateMatrix group_rates = group_rate_matrix(grouping, mc_rates);

            PfComparisonRecord rec_a;
            rec_a.placement = p;
            rec_a.subframe = t;
            rec_a.arm = "lp_then_pf";
            std::vector<char> reserved(cfg.n_prbs, 0);
            if (auto frac = solve_lp_relaxation(group_rates, cfg.r_req_kbps)) {
                if (auto state = round_lp(*frac, group_rates, cfg.r_req_kbps)) {
                    const FeasibilityReport report =
                        evaluate(*state, group_rates, cfg.r_req_kbps);
                    rec_a.multicast_feasible = report.feasible();
                    for (int i = 0; i < grouping.n_groups(); ++i)
                        rec_a.multicast_sum_kbps += group_size[i] * report.group_rates_kbps[i];
                    for (int j = 0; j < cfg.n_prbs; ++j)
                        reserved[j] = state->owner[j] != 0;
                }
            }
            if (cfg.pf_unicast_ues > 0) {
                RateMatrix uc_rates(cfg.pf_unicast_ues, cfg.n_prbs, t);
                for (int u = 0; u < cfg.pf_unicast_ues; ++u)
                    for (int j = 0; j < cfg.n_prbs; ++j)
                        uc_rates.at(u, j) = all_rates.at(cfg.n_ues + u, j);
                const AllocationState pf_state = pf_allocate(
                    uc_rates, history_a, reserved, cfg.pf_epsilon_kbps, cfg.pf_window_subframes);
                for (int j = 0; j < cfg.n_prbs; ++j)
                    if (pf_state.owner[j] != 0)
                        rec_a.unicast_sum_kbps += uc_rates.at(pf_state.owner[j] - 1, j);
            }

            // Arm B: plain PF over everyone, multicast UEs as unicast flows.
            PfComparisonRecord rec_b;
            rec_b.placement = p;
            rec_b.subframe = t;
            rec_b.arm = "pure_pf";
            const std::vector<char> none(cfg.n_prbs, 0);
            const AllocationState pf_all = pf_allocate(all_rates, history_b, none,
                                                       cfg.pf_epsilon_kbps,
                                                       cfg.pf_window_subframes);
            std::vector<double> per_ue(total_ues, 0.0);
            for (int j = 0; j < cfg.n_prbs; ++j)
                if (pf_all.owner[j] != 0)
                    per_ue[pf_all.owner[j] - 1] += all_rates.at(pf_all.owner[j] - 1, j);
            rec_b.multicast_feasible = true;
            for (int u = 0; u < total_ues; ++u) {
                if (u < cfg.n_ues) {
                    rec_b.multicast_sum_kbps += per_ue[u];
                    if (per_ue[u] < cfg.r_req_kbps) rec_b.multicast_feasible = false;
                } else {
                    rec_b.unicast_sum_kbps += per_ue[u];
                }
            }

            const std::size_t base =
                (static_cast<std::size_t>(p) * cfg.n_subframes + t) * 2;
            records[base] = std::move(rec_a);
            records[base + 1] = std::move(rec_b);
        }
    });
    return records;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc())
        throw std::runtime_error("bad numeric CSV field: '" + s + "'");
    return v;
}

constexpr const char* kMetricsHeader =
    "placement,subframe,scheme,grouping,ues,groups,used_prbs,unused_prbs,feasible,"
    "sum_rate_kbps,wall_time_us";

}  // namespace

void write_csv(const std::vector<MetricsRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV file: " + path);
    out << kMetricsHeader << "\n";
    for (const auto& r : records) {
        out << r.placement << ',' << r.subframe << ',' << csv_escape(r.scheme) << ','
            << csv_escape(r.grouping) << ',' << r.n_ues << ',' << r.n_groups << ','
            << r.used_prbs << ',' << r.unused_prbs << ',' << (r.feasible ? 1 : 0) << ','
            << format_double(r.sum_rate_kbps) << ',' << format_double(r.wall_time_us) << "\n";
    }
    if (!out) throw std::runtime_error("write failed for CSV file: " + path);
}

std::vector<MetricsRecord> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kMetricsHeader)
        throw std::runtime_error("unexpected CSV header in " + path);
    std::vector<MetricsRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 11) throw std::runtime_error("bad CSV row in " + path);
        MetricsRecord r;
        r.placement = std::stoi(f[0]);
        r.subframe = std::stoi(f[1]);
        r.scheme = f[2];
        r.grouping = f[3];
        r.n_ues = std::stoi(f[4]);
        r.n_groups = std::stoi(f[5]);
        r.used_prbs = std::stoi(f[6]);
        r.unused_prbs = std::stoi(f[7]);
        r.feasible = f[8] == "1";
        r.sum_rate_kbps = parse_double(f[9]);
        r.wall_time_us = parse_double(f[10]);
        records.push_back(std::move(r));
    }
    return records;
}

void write_pf_csv(const std::vector<PfComparisonRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV file: " + path);
    out << "placement,subframe,arm,multicast_sum_kbps,unicast_sum_kbps,multicast_feasible\n";
    for (const auto& r : records) {
        out << r.placement << ',' << r.subframe << ',' << csv_escape(r.arm) << ','
            << format_double(r.multicast_sum_kbps) << ',' << format_double(r.unicast_sum_kbps)
            << ',' << (r.multicast_feasible ? 1 : 0) << "\n";
    }
}

SweepSummaryRow summarize(const std::vector<MetricsRecord>& records) {
    if (records.empty()) throw std::invalid_argument("summarize: no records");
    SweepSummaryRow row;
    row.n_ues = records.front().n_ues;
    row.grouping = records.front().grouping;
    row.scheme = records.front().scheme;
    double unused = 0.0, time_us = 0.0;
    long long infeasible = 0;
    for (const auto& r : records) {
        unused += r.unused_prbs;
        time_us += r.wall_time_us;
        if (!r.feasible) ++infeasible;
    }
    row.mean_unused_prbs = unused / static_cast<double>(records.size());
    row.infeasible_per_1000 =
        1000.0 * static_cast<double>(infeasible) / static_cast<double>(records.size());
    row.mean_alloc_time_us = time_us / static_cast<double>(records.size());
    return row;
}

void write_summary_csv(const std::vector<SweepSummaryRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV file: " + path);
    out << "ues,grouping,allocator,mean_unused_prbs,infeasible_per_1000,mean_alloc_time_us\n";
    for (const auto& r : rows) {
        out << r.n_ues << ',' << csv_escape(r.grouping) << ',' << csv_escape(r.scheme) << ','
            << format_double(r.mean_unused_prbs) << ',' << format_double(r.infeasible_per_1000)
            << ',' << format_double(r.mean_alloc_time_us) << "\n";
    }
}

}  // namespace mcast
