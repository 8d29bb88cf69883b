#include "doctest.h"

#include "timepar/csvio.hpp"
#include "timepar/errors.hpp"
#include "timepar/problems.hpp"
#include "timepar/stepper.hpp"

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

using namespace timepar;
namespace fs = std::filesystem;

namespace {

std::string tmp_path(const std::string& name) {
    return (fs::temp_directory_path() / ("timepar_test_" + name)).string();
}

std::string data_dir() {
    if (const char* env = std::getenv("TIMEPAR_DATA_DIR")) return env;
#ifdef TIMEPAR_DATA_DIR
    return TIMEPAR_DATA_DIR;
#else
    return "data";
#endif
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in));
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

bool bits_equal(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

Trajectory sample_trajectory() {
    const SplitProblem prob = SplitProblem::pendulum(0.01);
    return integrate_sequential(prob, parse_scheme("sbab4"), make_state({1.0}, {0.0}),
                                0.01, 20, 5);
}

}  // namespace

TEST_CASE("text round trip preserves double bits in both notations") {
    std::mt19937_64 rng(20240817u);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-300, 300);

    std::vector<double> values = {0.0,
                                  -0.0,
                                  1.0 / 3.0,
                                  6.9728,
                                  std::numeric_limits<double>::min(),
                                  std::numeric_limits<double>::max(),
                                  std::numeric_limits<double>::denorm_min(),
                                  -1.2345678912345678e-7};
    for (int i = 0; i < 500; ++i)
        values.push_back(std::ldexp(mant(rng), expo(rng)));

    for (double v : values) {
        CHECK(bits_equal(parse_double(format_double(v)), v));
        CHECK(bits_equal(parse_double(format_double(v, true)), v));
    }
}

TEST_CASE("hexadecimal floating point is accepted on input") {
    CHECK(parse_double("0x1.8p1") == 3.0);
    CHECK(parse_double("-0x1p-3") == -0.125);
}

TEST_CASE("malformed numeric fields are rejected") {
    CHECK_THROWS_AS(parse_double(""), config_error);
    CHECK_THROWS_AS(parse_double("abc"), config_error);
    CHECK_THROWS_AS(parse_double("1.5x"), config_error);
    CHECK_THROWS_AS(parse_double("1.5 "), config_error);
    CHECK_THROWS_AS(parse_double("1e999"), config_error);
    CHECK_THROWS_AS(parse_double("--2"), config_error);
}

TEST_CASE("trajectory files survive a write-read-write cycle byte for byte") {
    const Trajectory traj = sample_trajectory();
    REQUIRE(traj.states.size() == 5);

    for (bool hex : {false, true}) {
        CAPTURE(hex);
        const std::string path = tmp_path(hex ? "traj_hex.csv" : "traj_dec.csv");
        write_trajectory_csv(path, traj, hex);
        const Trajectory back = read_trajectory_csv(path);

        REQUIRE(back.states.size() == traj.states.size());
        CHECK(back.t0 == traj.states.front().t);
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            CHECK(bits_equal(back.states[i].t, traj.states[i].t));
            REQUIRE(back.states[i].dof() == 1);
            CHECK(bits_equal(back.states[i].p[0], traj.states[i].p[0]));
            CHECK(bits_equal(back.states[i].q[0], traj.states[i].q[0]));
            CHECK(bits_equal(back.energies[i], traj.energies[i]));
        }

        const std::string again = tmp_path("traj_again.csv");
        write_trajectory_csv(again, back, hex);
        CHECK(slurp(again) == slurp(path));
    }
}

TEST_CASE("multi-component trajectories get indexed column headers") {
    Trajectory traj;
    traj.t0 = 0.0;
    traj.dt = 0.5;
    traj.sample_every = 1;
    traj.states = {make_state({1.0, 2.0}, {3.0, 4.0}, 0.0),
                   make_state({1.5, 2.5}, {3.5, 4.5}, 0.5)};
    traj.energies = {10.0, 10.5};

    const std::string path = tmp_path("traj_dof2.csv");
    write_trajectory_csv(path, traj);
    const std::string text = slurp(path);
    CHECK(text.rfind("t,p0,p1,q0,q1,energy\n", 0) == 0);

    const Trajectory back = read_trajectory_csv(path);
    REQUIRE(back.states.size() == 2);
    REQUIRE(back.states[1].dof() == 2);
    CHECK(back.states[1].p[1] == 2.5);
    CHECK(back.states[1].q[0] == 3.5);
    CHECK(back.energies[1] == 10.5);
}

TEST_CASE("iteration logs round trip") {
    const std::vector<IterationRecord> log = {{1, 0, 3, 0.5},
                                              {2, 3, 2, 1.2345678901234567e-17},
                                              {3, 5, 1, 0.0}};
    const std::string path = tmp_path("iters.csv");
    write_iteration_log_csv(path, log);
    const std::vector<IterationRecord> back = read_iteration_log_csv(path);
    REQUIRE(back.size() == log.size());
    for (std::size_t i = 0; i < log.size(); ++i) {
        CHECK(back[i].iteration == log[i].iteration);
        CHECK(back[i].frontier == log[i].frontier);
        CHECK(back[i].converged == log[i].converged);
        CHECK(bits_equal(back[i].max_correction, log[i].max_correction));
    }
}

TEST_CASE("sweep tables round trip") {
    std::vector<SweepRow> rows(2);
    rows[0].window = 50;
    rows[0].mean_converged = 6.9728;
    rows[0].cost_factor = 7.17072;
    rows[0].iterations = 1434;
    rows[1].window = 500;
    rows[1].mean_converged = 38.9066;
    rows[1].cost_factor = 12.8513;
    rows[1].iterations = 257;

    const std::string path = tmp_path("sweep.csv");
    write_sweep_csv(path, rows);
    const std::vector<SweepRow> back = read_sweep_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].window == 50);
    CHECK(bits_equal(back[0].mean_converged, 6.9728));
    CHECK(bits_equal(back[0].cost_factor, 7.17072));
    CHECK(back[0].iterations == 1434);
    CHECK(back[1].window == 500);
    CHECK(back[1].iterations == 257);
}

TEST_CASE("atomic writes leave no temporary and replace the target") {
    const std::string path = tmp_path("atomic.txt");
    write_text_atomic(path, "first\n");
    write_text_atomic(path, "second\n");
    CHECK(slurp(path) == "second\n");
    CHECK(!fs::exists(path + ".tmp"));

    const std::string bad =
        (fs::temp_directory_path() / "timepar_missing_dir" / "x.txt").string();
    fs::remove_all(fs::temp_directory_path() / "timepar_missing_dir");
    CHECK_THROWS_AS(write_text_atomic(bad, "y"), std::runtime_error);
}

TEST_CASE("speed-up curves and summaries use the documented layout") {
    const std::string curve_path = tmp_path("curve.csv");
    write_speedup_csv(curve_path, {{0, 0.0}, {1, 2.5}, {2, 4.0}});
    CHECK(slurp(curve_path) == "P,S\n0,0\n1,2.5\n2,4\n");

    const std::string summary_path = tmp_path("summary.txt");
    write_summary(summary_path, {{"alpha", "1"}, {"name", "two words"}});
    CHECK(slurp(summary_path) == "alpha=1\nname=two words\n");
}

TEST_CASE("reference sweep tables load from the data directory") {
    const std::string dir = data_dir();

    const std::vector<SweepRow> pend =
        read_sweep_csv(dir + "/pendulum_window_sweep_reference.csv");
    REQUIRE(pend.size() == 10);
    CHECK(pend.front().window == 50);
    CHECK(pend.front().iterations == 1434);
    CHECK(pend.front().mean_converged == 6.9728);
    CHECK(pend.back().window == 500);
    CHECK(pend.back().iterations == 257);
    for (std::size_t i = 1; i < pend.size(); ++i) {
        CHECK(pend[i].window == pend[i - 1].window + 50);
        CHECK(pend[i].iterations < pend[i - 1].iterations);
        CHECK(pend[i].mean_converged > pend[i - 1].mean_converged);
    }

    const std::vector<SweepRow> spin =
        read_sweep_csv(dir + "/spinorbit_window_sweep_reference.csv");
    REQUIRE(spin.size() == 10);
    CHECK(spin.front().iterations == 1642);
    CHECK(spin.back().iterations == 402);
    for (std::size_t i = 1; i < spin.size(); ++i)
        CHECK(spin[i].iterations < spin[i - 1].iterations);
}

TEST_CASE("structurally broken files are rejected") {
    const std::string path = tmp_path("broken.csv");

    write_text_atomic(path, "# only a comment\n\n");
    CHECK_THROWS_AS(read_sweep_csv(path), config_error);

    write_text_atomic(path, "P,C_dt,I_dtP,k_dtP\n50,6.9,7.1\n");
    CHECK_THROWS_AS(read_sweep_csv(path), config_error);

    write_text_atomic(path, "t,p,q\n0,1,0\n");
    CHECK_THROWS_AS(read_trajectory_csv(path), config_error);

    write_text_atomic(path, "t,p,q,energy\n0,1,0\n");
    CHECK_THROWS_AS(read_trajectory_csv(path), config_error);

    write_text_atomic(path, "iter,frontier,conv,max_correction\n1,0,x,0\n");
    CHECK_THROWS_AS(read_iteration_log_csv(path), config_error);

    CHECK_THROWS_AS(read_sweep_csv(tmp_path("no_such_file.csv")),
                    std::runtime_error);
}
