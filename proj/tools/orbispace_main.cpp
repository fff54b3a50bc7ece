#include "orbispace/jsonio.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open " << path << "\n";
        std::exit(1);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact decision engine for orbit spaces of compact monomial group actions"};
    app.require_subcommand(1);

    std::string input = "-";
    bool pretty = false;
    std::size_t max_lines = 24;
    orbi::io::CommandOptions opts;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("input", input, "spec document (JSON file, or - for stdin)");
        sub->add_flag("--pretty", pretty, "append a human-readable summary");
        sub->add_option("--max-lines", max_lines, "line-count guard for input documents");
    };

    auto* validate = app.add_subcommand("validate", "check the document and report Ad data");
    add_common(validate);

    auto* stability = app.add_subcommand("stability", "test q-stability of the weight multiset");
    std::size_t q = 2;
    stability->add_option("--q", q, "removal budget")->required();
    add_common(stability);

    auto* reduce = app.add_subcommand("reduce", "run the elimination pipeline to 2-stability");
    add_common(reduce);

    auto* group = app.add_subcommand("group", "enumerate the component group");
    add_common(group);

    auto* analyze = app.add_subcommand("analyze", "decide the orbit-space manifold status");
    std::size_t iv_trials = 0;
    std::uint64_t seed = 0;
    auto* trials_opt =
        analyze->add_option("--iv-trials", iv_trials, "sampling budget for the stabilizer test");
    auto* seed_opt = analyze->add_option("--seed", seed, "sampling seed");
    add_common(analyze);

    auto* lab = app.add_subcommand("lab", "floating-point cross-checks");
    std::size_t lab_trials = 0;
    auto* lab_trials_opt = lab->add_option("--trials", lab_trials, "trials per check");
    auto* lab_seed_opt = lab->add_option("--seed", seed, "sampling seed");
    add_common(lab);

    CLI11_PARSE(app, argc, argv);

    opts.q = q;
    opts.max_lines = max_lines;
    if (seed_opt->count() > 0 || lab_seed_opt->count() > 0) opts.seed = seed;
    if (trials_opt->count() > 0) opts.trials = iv_trials;
    if (lab_trials_opt->count() > 0) opts.trials = lab_trials;
    if (const char* cap = std::getenv("ORBISPACE_CAP")) opts.cap = std::strtoull(cap, nullptr, 10);

    std::string command = app.get_subcommands().front()->get_name();
    auto result = orbi::io::run_command(command, read_input(input), opts);
    std::cout << result.report.dump(2) << "\n";
    if (pretty) std::cout << orbi::io::human_summary(result.report);
    return result.exit_code;
}
