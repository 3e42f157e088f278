#include <CLI11.hpp>
#include <json.hpp>

#include <clocale>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "skg/config.hpp"
#include "skg/harness.hpp"

namespace {

using nlohmann::json;

void print_error(const char* type, const std::string& message) {
    json e;
    e["error"] = {{"type", type}, {"message", message}};
    std::cerr << e.dump() << "\n";
}

skg::RunConfig load(const std::string& kind, const std::string& config_path) {
    if (config_path.empty())
        return skg::parse_config_text("{\"kind\":\"" + kind + "\"}");
    std::ifstream in(config_path);
    if (!in) throw skg::ConfigError("config: cannot open " + config_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    json j;
    try {
        j = json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw skg::ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw skg::ConfigError("config: expected a JSON object");
    if (!j.contains("kind"))
        j["kind"] = kind;
    else if (j["kind"] != kind)
        throw skg::ConfigError("kind: config file says \"" + j["kind"].get<std::string>() +
                               "\" but the subcommand is \"" + kind + "\"");
    return skg::parse_config_text(j.dump());
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_NUMERIC, "C");
    CLI::App app{"Schroedinger-Klein-Gordon simulator and verification harness"};
    app.require_subcommand(1);

    struct Args {
        std::string config, out;
        std::uint64_t seed = 0;
        int threads = 0;
        bool seed_set = false, out_set = false, threads_set = false;
    };

    const char* kinds[] = {"renorm_scan", "classical_run", "dress_check", "quantum_correspond",
                           "verify_all"};
    const char* blurbs[] = {"self-energy and weighted-norm sweep over the UV cutoff",
                            "Strang evolution of the coupled system with conservation checks",
                            "dressing-map invariant suite",
                            "coherent-state Bohr correspondence experiment",
                            "small canned run of every experiment"};
    Args args[5];
    for (int i = 0; i < 5; ++i) {
        CLI::App* sub = app.add_subcommand(kinds[i], blurbs[i]);
        sub->add_option("--config", args[i].config, "JSON config path");
        sub->add_option("--out", args[i].out, "output directory override")
            ->each([&, i](const std::string&) { args[i].out_set = true; });
        sub->add_option("--seed", args[i].seed, "RNG seed override")
            ->each([&, i](const std::string&) { args[i].seed_set = true; });
        sub->add_option("--threads", args[i].threads, "worker thread count")
            ->each([&, i](const std::string&) { args[i].threads_set = true; });
    }

    CLI11_PARSE(app, argc, argv);

    int which = 0;
    for (int i = 0; i < 5; ++i)
        if (app.get_subcommand(kinds[i])->parsed()) which = i;

    try {
        skg::RunConfig cfg = load(kinds[which], args[which].config);
        if (args[which].out_set) cfg.out_dir = args[which].out;
        if (args[which].seed_set) cfg.seed = args[which].seed;
        if (args[which].threads_set) cfg.threads = args[which].threads;
        if (const char* env = std::getenv("SKG_THREADS")) {
            char* end = nullptr;
            const long v = std::strtol(env, &end, 10);
            if (end == env || *end != '\0' || v < 1)
                throw skg::ConfigError("SKG_THREADS: must be a positive integer");
            cfg.threads = static_cast<int>(v);
        }
        const skg::RunReport rep = skg::run(cfg);
        for (const auto& c : rep.checks)
            std::printf("[%s] %-36s value=%.6g threshold=%.6g\n", c.pass ? "PASS" : "FAIL",
                        c.name.c_str(), c.value, c.threshold);
        std::printf("%s: %s in %.2fs, artifacts in %s\n", kinds[which],
                    rep.pass ? "all checks passed" : "CHECKS FAILED", rep.wall_time_s,
                    cfg.out_dir.c_str());
        return rep.pass ? 0 : 4;
    } catch (const skg::ConfigError& e) {
        print_error("config", e.what());
        return 2;
    } catch (const skg::NumericError& e) {
        print_error("numeric", e.what());
        return 3;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 3;
    }
}
