#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pmm/sim/runner.hpp"

namespace fs = std::filesystem;
using namespace pmm;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
}

void spill(const fs::path& path, std::span<const uint8_t> data) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    file.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
}

void spill(const fs::path& path, const std::string& text) {
    spill(path, {reinterpret_cast<const uint8_t*>(text.data()), text.size()});
}

/* Dishonesty defined as anything the authority would act on. */
bool flagged(const sim::RunResult& run) {
    if (!run.riders.passed) return true;
    for (const auto& qr : run.queries)
        if (qr.answered && !qr.verdict.accepted) return true;
    return false;
}

int cmd_run(const std::string& scenario_path, uint64_t seed, const std::string& out_dir) {
    const sim::Scenario sc = sim::load_scenario(scenario_path);
    const sim::RunResult run = sim::run_scenario(sc, seed);
    std::cout << run.to_text();

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        spill(fs::path(out_dir) / "report.txt", run.to_text());

        /* The first answered query's transcript, stored alongside the
         * replay recipe so verify-transcript can rebuild its instance. */
        size_t index = run.queries.size();
        for (size_t i = 0; i < run.queries.size(); i++)
            if (run.queries[i].answered) {
                index = i;
                break;
            }
        if (index < run.queries.size()) {
            spill(fs::path(out_dir) / "transcript.bin", run.queries[index].transcript.serialize());
            std::ostringstream meta;
            meta << "seed " << seed << "\n";
            meta << "query " << index << "\n";
            meta << "scenario\n" << slurp(scenario_path);
            spill(fs::path(out_dir) / "run.meta", meta.str());
        }
    }
    return flagged(run) ? 1 : 0;
}

int cmd_batch(const std::string& scenario_path, uint64_t seeds) {
    const sim::Scenario sc = sim::load_scenario(scenario_path);
    uint64_t flags = 0;
    int64_t fines = 0;
    for (uint64_t seed = 1; seed <= seeds; seed++) {
        const sim::RunResult run = sim::run_scenario(sc, seed);
        size_t accepted = 0, answered = 0;
        for (const auto& qr : run.queries) {
            answered += qr.answered;
            accepted += qr.answered && qr.verdict.accepted;
        }
        std::cout << "seed " << seed << " accepted=" << accepted << "/" << answered
                  << " fines=" << run.total_fines << " riders="
                  << (run.riders.passed ? "pass" : "FAIL");
        if (run.ran_ara) std::cout << " audit-total=" << (run.ara_ok ? "pass" : "FAIL");
        if (run.ran_rra) std::cout << " audit-rounds=" << (run.rra_ok ? "pass" : "FAIL");
        std::cout << "\n";
        flags += flagged(run);
        fines += run.total_fines;
    }
    std::cout << "seeds=" << seeds << " flagged=" << flags << " rate="
              << (seeds ? double(flags) / double(seeds) : 0.0) << " total-fines=" << fines << "\n";
    return 0;
}

int cmd_verify(const std::string& transcript_path) {
    const fs::path meta_path = fs::path(transcript_path).parent_path() / "run.meta";
    std::istringstream meta(slurp(meta_path.string()));

    std::string word;
    uint64_t seed = 0;
    size_t index = 0;
    if (!(meta >> word >> seed) || word != "seed")
        throw std::runtime_error(meta_path.string() + ": expected 'seed <n>'");
    if (!(meta >> word >> index) || word != "query")
        throw std::runtime_error(meta_path.string() + ": expected 'query <i>'");
    if (!(meta >> word) || word != "scenario")
        throw std::runtime_error(meta_path.string() + ": expected 'scenario'");
    meta.ignore(1);  // newline after the header
    std::stringstream rest;
    rest << meta.rdbuf();

    const sim::Scenario sc = sim::Scenario::parse(rest.str(), "replay");
    const std::string blob = slurp(transcript_path);
    const bool ok = sim::verify_transcript_bytes(
        sc, seed, index, {reinterpret_cast<const uint8_t*>(blob.data()), blob.size()});
    std::cout << (ok ? "transcript verifies" : "transcript REJECTED") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mobility commitment protocol simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir, transcript_path;
    uint64_t seed = 1, seeds = 10;

    CLI::App* run = app.add_subcommand("run", "play one scenario for one seed");
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--seed", seed, "run seed");
    run->add_option("--out", out_dir, "directory for report.txt, transcript.bin, run.meta");

    CLI::App* batch = app.add_subcommand("batch", "play one scenario across seeds 1..N");
    batch->add_option("scenario", scenario_path, "scenario file")->required();
    batch->add_option("--seeds", seeds, "number of seeds");

    CLI::App* verify = app.add_subcommand("verify-transcript",
                                          "re-derive a run's instance and check a stored proof");
    verify->add_option("transcript", transcript_path, "transcript.bin with run.meta beside it")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(scenario_path, seed, out_dir);
        if (batch->parsed()) return cmd_batch(scenario_path, seeds);
        return cmd_verify(transcript_path);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
}
