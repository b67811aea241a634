#include <algorithm>
#include <filesystem>
#include <mutex>
#include <thread>
#include <type_traits>

#include "gr1shield/experiments.hpp"
#include "gr1shield/monitor.hpp"
#include "gr1shield/shield.hpp"

namespace gr1shield {

namespace {

struct Shared {
    std::shared_ptr<const Controller> shield;
    std::shared_ptr<const Controller> reference;
    /// Spec holding the guarantees checked per episode (minepump only).
    std::optional<Spec> ideal;
};

std::string fixture(const ExperimentConfig& cfg, const std::string& file) {
    return (std::filesystem::path(cfg.fixtures_dir) / file).string();
}

Shared prepare(const ExperimentConfig& cfg) {
    cfg.validate();
    Shared sh;
    sh.reference = std::make_shared<const Controller>(
        Controller::synthesize(load_spec(fixture(cfg, reference_spec_file(cfg.env))), cfg.repair.game));
    std::string file = cfg.spec_path;
    if (file.empty() && cfg.variant != Variant::None) file = fixture(cfg, shield_spec_file(cfg.variant, cfg.env));
    if (!file.empty()) {
        Spec spec = load_spec(file);
        if (print_spec(spec) == print_spec(sh.reference->source())) sh.shield = sh.reference;
        else sh.shield = std::make_shared<const Controller>(Controller::synthesize(spec, cfg.repair.game));
    }
    if (cfg.env == "minepump") sh.ideal = load_spec(fixture(cfg, "minepump_repaired.gr1"));
    return sh;
}

std::uint64_t stream_seed(std::uint64_t seed, Variant v, std::uint64_t phase) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(phase)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

/// Reorders label-order values (env vars then sys vars) into a spec's declaration order.
Assignment to_assignment(const Spec& spec, const std::vector<std::string>& names, const std::vector<std::int64_t>& v) {
    Assignment a(spec.vars.size(), 0);
    for (std::size_t i = 0; i < names.size(); ++i) {
        const int k = spec.var_index(names[i]);
        if (k >= 0) a[static_cast<std::size_t>(k)] = v[i];
    }
    return a;
}

struct EpisodeStats {
    double ret = 0.0;
    std::size_t steps = 0;
    std::size_t overrides = 0;
    std::size_t in_w = 0;
    std::vector<bool> ok;
};

template <class Env>
class Runner {
public:
    Runner(const ExperimentConfig& cfg, const Shared& sh, std::uint64_t seed)
        : cfg_(cfg), sh_(sh), seed_(seed), names_(Env::env_vars()) {
        for (const auto& n : Env::sys_vars()) names_.push_back(n);
        Env probe;
        q_ = QTable(probe.num_abstract_states(), Env::num_actions);
        set_controller(sh.shield);
    }

    RunMetrics run(bool train);
    QTable& table() { return q_; }

private:
    bool symbolic() const { return cfg_.variant == Variant::Symbolic1 || cfg_.variant == Variant::Symbolic2; }
    bool adaptive() const { return cfg_.variant == Variant::Adaptive; }
    const Controller& tracked() const { return ctrl_ ? *ctrl_ : *sh_.reference; }

    void set_controller(std::shared_ptr<const Controller> c) {
        ctrl_ = std::move(c);
        const Controller& t = tracked();
        env_lab_ = Labeller(t, Env::env_vars());
        sys_lab_ = Labeller(t, Env::sys_vars());
    }

    EpisodeStats episode(const Env& env, bool training, std::mt19937_64& rng, std::size_t budget);
    void try_repair(ShieldState& st, const std::vector<std::vector<std::int64_t>>& history,
                    std::vector<std::int64_t> tentative);
    std::size_t fallback_action(const std::vector<std::vector<std::int64_t>>& history,
                                const std::vector<std::vector<std::int64_t>>& candidates) const;
    std::vector<bool> check(const std::vector<std::vector<std::int64_t>>& history, const typename Env::State& last,
                            const Env& env) const;

    const ExperimentConfig& cfg_;
    const Shared& sh_;
    std::uint64_t seed_;
    std::vector<std::string> names_;
    std::shared_ptr<const Controller> ctrl_;
    Labeller env_lab_, sys_lab_;
    QTable q_;
    std::size_t global_step_ = 0;
    bool repair_disabled_ = false;
    std::vector<TraceRecord>* rec_ = nullptr;
    RunMetrics m_;
};


template <class Env>
EpisodeStats Runner<Env>::episode(const Env& env, bool training, std::mt19937_64& rng, std::size_t budget) {
    EpisodeStats es;
    typename Env::State s = env.initial(rng);
    std::vector<std::vector<std::int64_t>> history;
    ShieldState st;
    st.controller = ctrl_ ? ctrl_ : sh_.reference;
    const std::size_t horizon = std::min(static_cast<std::size_t>(env.episode_length()), budget);
    const std::size_t ne = Env::env_vars().size();
    std::vector<std::vector<std::int64_t>> cand(Env::num_actions);
    std::vector<State> sys(Env::num_actions);

    for (std::size_t t = 0; t < horizon; ++t) {
        const auto env_vals = env.labels(s);
        for (std::size_t a = 0; a < Env::num_actions; ++a) {
            cand[a] = env_vals;
            const auto act = env.action_labels(a, s);
            cand[a].insert(cand[a].end(), act.begin(), act.end());
        }
        const bool respects = env_respects(st, env_lab_.encode(env_vals));
        std::optional<std::string> violation;
        if (!respects && rec_) {
            const Spec& spec = tracked().source();
            std::vector<Assignment> window;
            if (!history.empty()) window.push_back(to_assignment(spec, names_, history.back()));
            window.push_back(to_assignment(spec, names_, cand[0]));
            const Verdict v = check_step(window, spec);
            violation = v.kind == Verdict::Kind::Violated ? v.unit : "assumptions";
        }
        if (!respects && ctrl_ && adaptive() && !repair_disabled_) {
            std::vector<std::int64_t> tentative = history.empty() ? cand[0] : history.back();
            std::copy(env_vals.begin(), env_vals.end(), tentative.begin());
            try_repair(st, history, std::move(tentative));
        }
        const State eb = env_lab_.encode(env_vals);
        for (std::size_t a = 0; a < Env::num_actions; ++a)
            sys[a] = sys_lab_.encode(std::span<const std::int64_t>(cand[a]).subspan(ne));

        const std::size_t abs = env.abstract_state(s);
        std::size_t proposed = 0;
        if (!symbolic())
            proposed = training ? select_action(q_, abs, cfg_.agent.epsilon(global_step_), rng) : q_.greedy(abs);
        std::size_t chosen = proposed;
        TraceRecord rec;
        if (rec_) {
            rec.t = t;
            rec.proposed = proposed;
            rec.violation = violation;
        }
        if (ctrl_) {
            const auto safe = safe_actions(st, eb, sys);
            if (symbolic()) {
                chosen = safe.empty() ? fallback_action(history, cand) : safe[0];
                m_.deadlocks += safe.empty();
            } else {
                const FilterResult fr = filter(st, safe, proposed, q_.row(abs), rng);
                chosen = fr.chosen;
                es.overrides += fr.overridden;
                m_.deadlocks += fr.deadlock;
                rec.overridden = fr.overridden;
                rec.deadlock = fr.deadlock;
            }
        }
        const bool in_w = commit(st, eb, sys[chosen]).in_region;
        es.in_w += in_w;
        history.push_back(cand[chosen]);
        if (rec_) {
            rec.env_bits = eb;
            rec.sys_bits = sys[chosen];
            rec.values = to_assignment(tracked().source(), names_, cand[chosen]);
            rec.chosen = chosen;
            rec.in_W = in_w;
            rec_->push_back(std::move(rec));
        }

        const auto out = env.step(s, chosen, rng);
        const bool term = env.terminal(out.next);
        if (training && !symbolic())
            q_update(q_, abs, chosen, out.reward, env.abstract_state(out.next), cfg_.agent, term);
        if (training) ++global_step_;
        es.ret += out.reward;
        ++es.steps;
        s = out.next;
        if (term) break;
    }
    es.ok = check(history, s, env);
    return es;
}

template <class Env>
void Runner<Env>::try_repair(ShieldState& st, const std::vector<std::vector<std::int64_t>>& history,
                             std::vector<std::int64_t> tentative) {
    const Spec& spec = ctrl_->source();
    std::vector<Assignment> trace;
    for (const auto& h : history) trace.push_back(to_assignment(spec, names_, h));
    trace.push_back(to_assignment(spec, names_, tentative));
    try {
        RepairOutcome out = spec_repair(spec, trace, cfg_.repair);
        set_controller(out.controller);
        const std::size_t ne = Env::env_vars().size();
        ShieldState fresh;
        fresh.controller = ctrl_;
        for (const auto& h : history) {
            std::span<const std::int64_t> all(h);
            commit(fresh, env_lab_.encode(all.first(ne)), sys_lab_.encode(all.subspan(ne)));
        }
        st = fresh;
        ++m_.repairs;
    } catch (const RepairError&) {
        ++m_.repair_failures;
        repair_disabled_ = true;
    } catch (const UnrealizableError&) {
        ++m_.repair_failures;
        repair_disabled_ = true;
    } catch (const GameError&) {
        ++m_.repair_failures;
        repair_disabled_ = true;
    }
}

/// Deadlock rule of the symbolic controllers: the lowest action satisfying the
/// longest prefix of the guarantee list.
template <class Env>
std::size_t Runner<Env>::fallback_action(const std::vector<std::vector<std::int64_t>>& history,
                                         const std::vector<std::vector<std::int64_t>>& candidates) const {
    const Spec& spec = ctrl_->source();
    const Evaluator ev(spec);
    const auto guars = spec.units_of(UnitKind::Guarantee);
    auto holds = [&](const Unit* u, const std::vector<std::int64_t>& cand) {
        std::vector<Assignment> tr;
        if (!history.empty()) tr.push_back(to_assignment(spec, names_, history.back()));
        tr.push_back(to_assignment(spec, names_, cand));
        if (has_next(u->formula)) return tr.size() < 2 || ev.eval(u->formula, tr, 0);
        return ev.eval(u->formula, tr, tr.size() - 1);
    };
    for (std::size_t k = guars.size(); k > 0; --k)
        for (std::size_t a = 0; a < candidates.size(); ++a) {
            bool ok = true;
            for (std::size_t i = 0; i < k && ok; ++i) ok = holds(guars[i], candidates[a]);
            if (ok) return a;
        }
    return 0;
}

template <class Env>
std::vector<bool> Runner<Env>::check(const std::vector<std::vector<std::int64_t>>& history,
                                     const typename Env::State& last, const Env& env) const {
    if constexpr (std::is_same_v<Env, Seaquest>) {
        return {!env.terminal(last)};
    } else {
        const Spec& ideal = *sh_.ideal;
        const Evaluator ev(ideal);
        std::vector<Assignment> tr;
        for (const auto& h : history) tr.push_back(to_assignment(ideal, names_, h));
        std::vector<bool> ok;
        for (const auto& name : checked_guarantees(cfg_.env)) ok.push_back(ev.holds_globally(ideal.find_unit(name)->formula, tr));
        return ok;
    }
}

template <class Env>
RunMetrics Runner<Env>::run(bool train) {
    m_.seed = seed_;
    const Env train_env(EnvMode::Training), eval_env(cfg_.eval_mode);
    const std::size_t total = train ? cfg_.agent.total_steps : 0;

    std::mt19937_64 rng(stream_seed(seed_, cfg_.variant, 0));
    std::size_t steps = 0, in_w = 0, wins = 0;
    double ret = 0.0;
    while (global_step_ < total) {
        const EpisodeStats es = episode(train_env, true, rng, total - global_step_);
        const bool ok = std::all_of(es.ok.begin(), es.ok.end(), [](bool b) { return b; });
        m_.curve_return.push_back(es.ret);
        m_.curve_success.push_back(ok);
        ret += es.ret;
        wins += ok;
        steps += es.steps;
        in_w += es.in_w;
    }
    m_.train_episodes = m_.curve_return.size();
    if (m_.train_episodes > 0) {
        m_.train_reward = ret / static_cast<double>(m_.train_episodes);
        m_.train_success = static_cast<double>(wins) / static_cast<double>(m_.train_episodes);
        m_.train_in_w = static_cast<double>(in_w) / static_cast<double>(steps);
    }

    std::mt19937_64 eval_rng(stream_seed(seed_, cfg_.variant, 1));
    const std::size_t n = cfg_.agent.eval_episodes;
    steps = in_w = wins = 0;
    ret = 0.0;
    std::size_t overrides = 0;
    std::vector<std::size_t> per_guarantee(checked_guarantees(cfg_.env).size(), 0);
    for (std::size_t e = 0; e < n; ++e) {
        rec_ = e == 0 && cfg_.record_trace ? &m_.eval_trace : nullptr;
        const EpisodeStats es = episode(eval_env, false, eval_rng, static_cast<std::size_t>(-1));
        if (rec_) m_.trace_spec = print_spec(tracked().source());
        rec_ = nullptr;
        bool ok = true;
        for (std::size_t i = 0; i < es.ok.size(); ++i) {
            per_guarantee[i] += es.ok[i];
            ok = ok && es.ok[i];
        }
        ret += es.ret;
        wins += ok;
        steps += es.steps;
        in_w += es.in_w;
        overrides += es.overrides;
    }
    if (n > 0) {
        const double dn = static_cast<double>(n);
        m_.eval_reward = ret / dn;
        m_.eval_success = static_cast<double>(wins) / dn;
        m_.eval_override = steps ? static_cast<double>(overrides) / static_cast<double>(steps) : 0.0;
        m_.eval_in_w = steps ? static_cast<double>(in_w) / static_cast<double>(steps) : 0.0;
        for (std::size_t c : per_guarantee) m_.eval_compliance.push_back(static_cast<double>(c) / dn);
    }
    if (ctrl_) m_.final_spec = print_spec(ctrl_->source());
    return m_;
}

template <class Env>
RunMetrics run_env(const ExperimentConfig& cfg, const Shared& sh, std::uint64_t seed, const QTable* preset,
                   QTable* q_out) {
    Runner<Env> r(cfg, sh, seed);
    if (preset) {
        if (preset->states() != r.table().states() || preset->actions() != r.table().actions())
            throw std::invalid_argument("q-table shape does not match the " + cfg.env + " environment");
        r.table() = *preset;
    }
    RunMetrics m = r.run(preset == nullptr);
    if (q_out) *q_out = r.table();
    return m;
}

RunMetrics run_with(const ExperimentConfig& cfg, const Shared& sh, std::uint64_t seed, const QTable* preset = nullptr,
                    QTable* q_out = nullptr) {
    if (cfg.env == "minepump") return run_env<Minepump>(cfg, sh, seed, preset, q_out);
    return run_env<Seaquest>(cfg, sh, seed, preset, q_out);
}

}  // namespace

RunMetrics run_seed(const ExperimentConfig& cfg, std::uint64_t seed, QTable* q_out) {
    const Shared sh = prepare(cfg);
    return run_with(cfg, sh, seed, nullptr, q_out);
}

RunMetrics eval_seed(const ExperimentConfig& cfg, std::uint64_t seed, const QTable& q) {
    const Shared sh = prepare(cfg);
    return run_with(cfg, sh, seed, &q, nullptr);
}

std::vector<RunMetrics> run_experiment(const ExperimentConfig& cfg, unsigned threads, std::vector<QTable>* tables) {
    const Shared sh = prepare(cfg);
    std::vector<RunMetrics> out(cfg.seeds.size());
    if (tables) tables->assign(cfg.seeds.size(), QTable{});
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::exception_ptr> errors(cfg.seeds.size());
    std::size_t next = 0;
    std::mutex mu;
    auto worker = [&] {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next >= cfg.seeds.size()) return;
                i = next++;
            }
            try {
                out[i] = run_with(cfg, sh, cfg.seeds[i], nullptr, tables ? &(*tables)[i] : nullptr);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < std::min<std::size_t>(threads, cfg.seeds.size()); ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace gr1shield
