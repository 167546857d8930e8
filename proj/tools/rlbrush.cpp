// Operator CLI: train / evaluate agents, summarise event logs, run the service.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <httplib.h>

#include "rlbrush/agents.hpp"
#include "rlbrush/kernels.hpp"
#include "rlbrush/service.hpp"
#include "rlbrush/session.hpp"

using namespace rlbrush;

namespace {

double mean_of(const std::vector<double>& v, std::size_t from, std::size_t to) {
    if (to <= from) return 0.0;
    double s = 0.0;
    for (std::size_t i = from; i < to; ++i) s += v[i];
    return s / static_cast<double>(to - from);
}

int run_train(const TrainConfig& cfg, const std::filesystem::path& out) {
    auto result = train(cfg);
    save_policy(result.policy, out);
    const auto& r = result.report;
    const std::size_t n = r.episodeReturns.size();
    const std::size_t tenth = std::max<std::size_t>(1, n / 10);
    std::printf("%-28s %s\n", "agent", std::string(to_string(cfg.kind)).c_str());
    std::printf("%-28s %ld\n", "episodes", cfg.episodes);
    std::printf("%-28s %llu\n", "seed", static_cast<unsigned long long>(cfg.seed));
    std::printf("%-28s %.4f\n", "mean return (first 10%)", mean_of(r.episodeReturns, 0, std::min(tenth, n)));
    std::printf("%-28s %.4f\n", "mean return (last 10%)", mean_of(r.episodeReturns, n - std::min(tenth, n), n));
    std::printf("%-28s %.3f\n", "playable fraction before", r.playableFractionBefore);
    std::printf("%-28s %.3f\n", "playable fraction after", r.playableFractionAfter);
    std::printf("%-28s %.1f\n", "seconds", r.seconds);
    std::printf("%-28s %s\n", "kernels", std::string(kernels::to_string(kernels::active_isa())).c_str());
    std::printf("%-28s %s\n", "policy", out.string().c_str());
    return 0;
}

int run_evaluate(const std::filesystem::path& model, int seeds) {
    const Policy p = load_policy(model);
    const auto r = evaluate_policy(p, seeds, p.featureSpec.gridWidth, p.featureSpec.gridHeight);
    std::printf("%-24s %s\n", "agent", std::string(to_string(p.kind)).c_str());
    std::printf("%-24s %d\n", "episodes", r.episodes);
    std::printf("%-24s %.3f\n", "playable fraction", r.playableFraction);
    if (r.meanSolutionLength) std::printf("%-24s %.2f\n", "mean solution length", *r.meanSolutionLength);
    else std::printf("%-24s n/a\n", "mean solution length");
    return 0;
}

int run_metrics(const std::filesystem::path& logPath) {
    const auto events = read_event_log(logPath);
    const auto sessions = replay_sessions(events);
    const auto m = compute_metrics(sessions);
    std::printf("Interaction event summary\n");
    std::printf("  %-44s %zu\n", "Total User Sessions", m.totalSessions);
    std::printf("  %-44s %zu\n", "Total Interaction Events", m.totalInteractions);
    std::printf("  %-44s %zu\n", "Total Suggestions Accepted", m.totalSuggestionsAccepted);
    std::printf("  %-44s %s\n", "Level Versions Per Session", format_sig(m.levelVersionsPerSession).c_str());
    std::printf("  %-44s %s\n", "Suggestions Accepted Per Session", format_sig(m.suggestionsAcceptedPerSession).c_str());
    std::printf("  %-44s %s\n", "Total Interactions Per Session", format_sig(m.interactionsPerSession).c_str());

    const auto t = playability_table(sessions);
    std::printf("\nPlayability by cohort\n");
    std::printf("  %-12s %8s %14s %8s\n", "", "Used AI", "Didn't Use AI", "Total");
    std::printf("  %-12s %8d %14d %8d\n", "Playable", t.usedAiPlayable, t.noAiPlayable, t.playable());
    std::printf("  %-12s %8d %14d %8d\n", "UnPlayable", t.usedAiUnplayable, t.noAiUnplayable, t.unplayable());
    std::printf("  %-12s %8d %14d %8d\n", "Total", t.used_ai(), t.no_ai(), t.total());
    return 0;
}

int run_serve(const std::filesystem::path& configPath) {
    const auto cfg = load_service_config(configPath);
    Service service(cfg, load_agents(cfg.modelDir));
    auto server = make_http_server(service);
    std::printf("listening on %s:%d (%zu sessions restored)\n", cfg.listenAddress.c_str(), cfg.port,
                service.session_count());
    std::fflush(stdout);
    if (!server->listen(cfg.listenAddress, cfg.port)) {
        std::fprintf(stderr, "error: cannot listen on %s:%d\n", cfg.listenAddress.c_str(), cfg.port);
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rlbrush: mixed-initiative Sokoban level editor backend"};
    app.require_subcommand(1);

    TrainConfig cfg;
    std::string agent;
    std::filesystem::path out;
    auto* train_cmd = app.add_subcommand("train", "Train one agent and write its policy file");
    train_cmd->add_option("--agent", agent, "narrow | turtle | wide")->required()
        ->check(CLI::IsMember({"narrow", "turtle", "wide"}));
    train_cmd->add_option("--episodes", cfg.episodes, "Training episodes")->required();
    train_cmd->add_option("--seed", cfg.seed, "Random seed")->required();
    train_cmd->add_option("--out", out, "Policy output file")->required();
    train_cmd->add_option("--width", cfg.gridWidth, "Grid width")->capture_default_str();
    train_cmd->add_option("--height", cfg.gridHeight, "Grid height")->capture_default_str();
    train_cmd->add_option("--radius", cfg.windowRadius, "Observation window radius")->capture_default_str();
    train_cmd->add_option("--lr", cfg.learningRate, "Learning rate")->capture_default_str();
    train_cmd->add_option("--discount", cfg.discount, "Discount factor")->capture_default_str();
    train_cmd->add_option("--epsilon-start", cfg.epsilonStart)->capture_default_str();
    train_cmd->add_option("--epsilon-end", cfg.epsilonEnd)->capture_default_str();

    std::filesystem::path model;
    int seeds = kEvaluationSeedCount;
    auto* eval_cmd = app.add_subcommand("evaluate", "Greedy playable-fraction evaluation of a policy");
    eval_cmd->add_option("--model", model, "Policy file")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--seeds", seeds, "Number of fixed evaluation seeds")->capture_default_str()
        ->check(CLI::PositiveNumber);

    std::filesystem::path logPath;
    auto* metrics_cmd = app.add_subcommand("metrics", "Summarise an event log");
    metrics_cmd->add_option("--log", logPath, "Event log (NDJSON)")->required()->check(CLI::ExistingFile);

    std::filesystem::path configPath;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
    serve_cmd->add_option("--config", configPath, "Service config (JSON)")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train_cmd) {
            cfg.kind = *agent_kind_from_string(agent);
            return run_train(cfg, out);
        }
        if (*eval_cmd) return run_evaluate(model, seeds);
        if (*metrics_cmd) return run_metrics(logPath);
        if (*serve_cmd) return run_serve(configPath);
    } catch (const Error& e) {
        std::fprintf(stderr, "error (%s): %s\n", e.kind(), e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
