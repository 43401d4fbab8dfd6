#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <dressedw/experiments.hpp>

using namespace dressedw;
using Catch::Approx;

TEST_CASE("sweep specs validate axis names and count", "[experiments]")
{
    SweepSpec s;
    s.axes = {{"kappa_over_g", {0.0}}, {"gamma_over_g", {0.0}}, {"g", {30.0}}};
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.axes = {{"temperature", {1.0}}};
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.axes = {{"g", {}}};
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.axes = {{"g", {1.0}}, {"g", {2.0}}};
    CHECK_THROWS_AS(s.validate(), ValidationError);
    for (auto name : kSweepParameters) {
        s.axes = {{std::string(name), {0.05}}};
        if (name == "g" || name == "omega0_stirap") {
            s.axes[0].values = {20.0};
        }
        CHECK_NOTHROW(s.validate());
    }
}

TEST_CASE("sweep expansion is a row-major product that keeps rates relative to g", "[experiments]")
{
    SweepSpec s;
    s.noise_over_g = {1e-3, 2e-3, 0.0};
    s.axes = {{"g", {10.0, 20.0}}, {"dT_over_T", {-0.1, 0.0, 0.1}}};
    const auto ss = s.expand();
    REQUIRE(ss.size() == 6);
    CHECK(ss[0].g == 10.0);
    CHECK(ss[0].variation.dT == -0.1);
    CHECK(ss[2].variation.dT == 0.1);
    CHECK(ss[3].g == 20.0);
    CHECK(ss[3].noise.kappa == Approx(0.02));
    CHECK(ss[3].noise.gamma == Approx(0.04));
}

TEST_CASE("scenario variations map onto the schedule", "[experiments]")
{
    Scenario s;
    s.variation = {0.1, 0.21, -0.1};
    CHECK(s.effective_g() == Approx(27.0));
    CHECK(s.final_time() == Approx(1.1));
    CHECK(s.amplitude_factor() == Approx(1.1));
    const PulseSchedule cut = s.schedule();
    CHECK(cut.duration() == Approx(1.1));
    CHECK(cut.shape_duration() == 1.0);
    s.duration_mode = DurationMode::rescale;
    s.amplitude_mode = AmplitudeMode::linear;
    CHECK(s.amplitude_factor() == Approx(1.21));
    CHECK(s.schedule().shape_duration() == Approx(1.1));
    s.variation.dOmega = -1.5;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    CHECK(parse_duration_mode("rescale") == DurationMode::rescale);
    CHECK(parse_amplitude_mode("linear") == AmplitudeMode::linear);
    CHECK_THROWS_AS(parse_duration_mode("stretch"), ValidationError);
    CHECK_THROWS_AS(parse_amplitude_mode("cubic"), ValidationError);
}

TEST_CASE("worker pool keeps input order and propagates errors", "[experiments]")
{
    std::vector<int> in(50);
    for (int i = 0; i < 50; ++i) {
        in[i] = i;
    }
    const auto out = parallel_map(in, [](int x) { return x * x; }, 4);
    for (int i = 0; i < 50; ++i) {
        CHECK(out[i] == i * i);
    }
    CHECK_THROWS_AS(parallel_map(in, [](int x) { if (x == 17) throw ValidationError("bad"); return x; }, 3),
                    ValidationError);
    CHECK_THROWS_AS(parallel_map(in, [](int x) { return x; }, 0), ValidationError);
}

TEST_CASE("sweeps are deterministic regardless of worker count", "[experiments]")
{
    SweepSpec s;
    s.noise_over_g = {1e-3, 0.0, 1e-4};
    s.axes = {{"gamma_over_g", {0.0, 2e-3}}, {"dOmega_over_Omega", {-0.05, 0.05}}};
    const std::string a = records_table(run_sweep(s, 1)).str();
    const std::string b = records_table(run_sweep(s, 3)).str();
    CHECK(a == b);
}

TEST_CASE("fidelity is non-increasing in every decoherence rate", "[experiments]")
{
    const std::vector<double> rates = {0.0, 5e-3, 1e-2};
    const std::vector<double> dephasing = {0.0, 5e-4, 1e-3};
    std::vector<Scenario> ss;
    for (double k : rates) {
        for (double gm : rates) {
            for (double gp : dephasing) {
                Scenario s;
                s.noise = {k * s.g, gm * s.g, gp * s.g};
                ss.push_back(s);
            }
        }
    }
    const auto rs = parallel_map(ss, run_scenario, default_jobs());
    auto f = [&](int i, int j, int k) { return rs[static_cast<std::size_t>(i * 9 + j * 3 + k)].fidelity; };
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                if (i < 2) CHECK(f(i + 1, j, k) <= f(i, j, k) + 1e-4);
                if (j < 2) CHECK(f(i, j + 1, k) <= f(i, j, k) + 1e-4);
                if (k < 2) CHECK(f(i, j, k + 1) <= f(i, j, k) + 1e-4);
            }
        }
    }
}

TEST_CASE("weak coupling breaks the protocol", "[experiments]")
{
    const auto rs = run_coupling_sweep({1.0, 30.0});
    CHECK(rs[0].fidelity < 0.9);
    CHECK(rs[0].fidelity < rs[1].fidelity);
}

TEST_CASE("comparison relations", "[experiments]")
{
    CHECK(compare("a", Relation::approx, 1.0, 1.005, 0.01).pass);
    CHECK_FALSE(compare("a", Relation::approx, 1.0, 1.02, 0.01).pass);
    CHECK(compare("b", Relation::at_least, 0.99, 0.995).pass);
    CHECK(compare("b", Relation::at_least, 0.99, 0.985, 0.01).pass);
    CHECK_FALSE(compare("b", Relation::at_least, 0.99, 0.985).pass);
    CHECK(compare("c", Relation::at_most, 0.25, 0.25).pass);
    CHECK_FALSE(compare("d", Relation::below, 0.01, 0.01).pass);
    CHECK(compare("e", Relation::above, 0.0, 1e-9).pass);
    CHECK(describe(compare("x", Relation::approx, 1.0, 1.0, 0.01)).rfind("PASS", 0) == 0);
    CHECK(describe(informational(compare("x", Relation::above, 1.0, 0.0))).rfind("INFO", 0) == 0);
    ExperimentOutput o;
    o.comparisons = {compare("x", Relation::above, 0.0, 1.0), informational(compare("y", Relation::above, 1.0, 0.0))};
    CHECK(o.passed());
}

TEST_CASE("paper tables are complete", "[experiments]")
{
    CHECK(kDecoherenceTable.size() == 17);
    CHECK(kDecoherenceTable.front().fidelity == 0.9389);
    CHECK(kDecoherenceTable.back().fidelity == 0.9936);
    CHECK(kVariationTable.size() == 8);
    CHECK(kVariationTable.back().fidelity == 0.9796);
}

TEST_CASE("experiment outputs are written with metadata and comparisons", "[experiments]")
{
    const auto dir = std::filesystem::temp_directory_path() / "dressedw_test_outputs";
    std::filesystem::remove_all(dir);
    ExperimentOptions o;
    o.jobs = 1;
    const ExperimentOutput out = reproduce("realistic", o);
    write_experiment(out, dir);
    CHECK(std::filesystem::exists(dir / "realistic.csv"));
    CHECK(std::filesystem::exists(dir / "realistic.comparison.csv"));
    std::ifstream f(dir / "realistic.meta.json");
    const json meta = json::parse(f);
    CHECK(meta.at("schema_version") == kSchemaVersion);
    CHECK(meta.at("version") == kVersion);
    CHECK(meta.at("parameters").at("n_steps") == 2000);
    CHECK(meta.at("comparisons").size() == 3);
    const std::string first = out.table.str();
    CHECK(first == reproduce("realistic", o).table.str());
    CHECK_THROWS_AS(reproduce("fig9"), ValidationError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("dark-state population stays below its dressed bound", "[experiments]")
{
    const PureTrajectory t = run_population_trace();
    double peak = 0.0;
    for (const auto &psi : t.states) {
        peak = std::max(peak, dark_population(psi));
    }
    CHECK(peak <= 0.25);
    CHECK(peak > 0.2);
}
