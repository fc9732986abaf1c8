#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <traindesign/channel.hpp>
#include <traindesign/experiments.hpp>
#include <traindesign/linalg.hpp>

#include "oracles.hpp"

using namespace traindesign;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name)
      : path(std::string("/tmp/traindesign_test_") + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

const CurveRow* find_row(const ExperimentResult& r, double x,
                         const std::string& scheme) {
  for (const CurveRow& row : r.rows) {
    if (row.x == x && row.scheme == scheme) return &row;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("config text parses keys, comments, and blanks") {
  auto kv = parse_config_text(
      "# a comment\n"
      "n_t = 3\n"
      "\n"
      "  rho_rt = 0.9@180   # trailing comment\n"
      "schemes = asgpp, white\n");
  CHECK(kv.at("n_t") == "3");
  CHECK(kv.at("rho_rt") == "0.9@180");
  CHECK(kv.at("schemes") == "asgpp, white");
  CHECK(kv.size() == 3);
}

TEST_CASE("config text rejects malformed lines with their number") {
  try {
    parse_config_text("n_t = 3\nbogus line\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("correlations parse magnitude and phase") {
  CHECK(parse_correlation("0.9") == cplx(0.9, 0.0));
  CHECK(std::abs(parse_correlation("0.9@180") - cplx(-0.9, 0.0)) < 1e-15);
  CHECK(std::abs(parse_correlation("0.5@90") - cplx(0.0, 0.5)) < 1e-15);
  CHECK_THROWS_AS(parse_correlation("oops"), ConfigError);
  CHECK_THROWS_AS(parse_correlation("0.9@"), ConfigError);
}

TEST_CASE("defaults follow the study geometry") {
  ExperimentConfig nm = default_config("nmse");
  CHECK(nm.n_t == 4);
  CHECK(nm.n_r == 2);
  CHECK(nm.b == 6);
  ExperimentConfig lo = default_config("lopt");
  CHECK(lo.n_t == 6);
  CHECK(lo.n_r == 6);
  CHECK(lo.b == 8);
  CHECK(lo.estimator == "mvu");
  ExperimentConfig eq = default_config("eq");
  CHECK(eq.n_t == 4);
  CHECK(eq.n_r == 2);
  CHECK(eq.b == 6);
  CHECK(eq.rho_sr != eq.rho_rr);  // mismatched receive factors by design
  ExperimentConfig zf = default_config("zf");
  CHECK(zf.n_t == 4);
  CHECK(zf.n_r == 4);
  CHECK(zf.b == 6);
  CHECK(zf.rho_sr == zf.rho_rr);
  ExperimentConfig ou = default_config("outage");
  CHECK(ou.n_t == 6);
  CHECK(ou.n_r == 6);
  CHECK(ou.b == 8);
  CHECK(ou.gamma == 1.0);
  CHECK_THROWS_AS(default_config("surprise"), ConfigError);
}

TEST_CASE("overrides apply and reject unknown keys") {
  ExperimentConfig cfg = default_config("nmse");
  apply_overrides(cfg, {{"n_t", "3"},
                        {"trials", "250"},
                        {"seed", "42"},
                        {"gamma_grid_db", "-3, 0, 3"},
                        {"schemes", "asgpp, white"}});
  CHECK(cfg.n_t == 3);
  CHECK(cfg.trials == 250);
  CHECK(cfg.seed == 42);
  REQUIRE(cfg.gamma_grid_db.size() == 3);
  CHECK(cfg.gamma_grid_db[0] == -3.0);
  REQUIRE(cfg.schemes.size() == 2);
  CHECK(cfg.schemes[1] == "white");

  CHECK_THROWS_AS(apply_overrides(cfg, {{"warp", "9"}}), ConfigError);
  CHECK_THROWS_AS(apply_overrides(cfg, {{"n_t", "three"}}), ConfigError);
}

TEST_CASE("validation enforces the experiment preconditions") {
  ExperimentConfig cfg = default_config("zf");
  cfg.n_r = 3;  // inversion needs a square channel
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);

  cfg = default_config("nmse");
  cfg.rho_sr = 0.2;  // breaks the matched receive factor requirement
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);

  cfg = default_config("nmse");
  cfg.b = 2;  // shorter than the transmit count
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);

  cfg = default_config("nmse");
  cfg.trials = 0;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);

  cfg = default_config("lopt");
  cfg.estimator = "map";
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
}

TEST_CASE("scheme lists follow the experiment and accept filters") {
  ExperimentConfig cfg = default_config("nmse");
  auto all = scheme_names(cfg);
  REQUIRE(all.size() == 3);
  CHECK(all[0] == "asgpp");
  CHECK(all[1] == "cmse");
  CHECK(all[2] == "white");

  cfg.schemes = {"white", "asgpp"};
  auto filtered = scheme_names(cfg);
  REQUIRE(filtered.size() == 2);
  CHECK(filtered[0] == "asgpp");  // canonical order, not filter order

  cfg.schemes = {"bogus"};
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
}

TEST_CASE("csv round trip preserves every bit") {
  StreamRng rng(101, 0, Stream::Generic);
  std::vector<CurveRow> rows;
  for (int i = 0; i < 20; ++i) {
    CurveRow r;
    r.x = -10.0 + 20.0 * rng.uniform();
    r.scheme = i % 2 ? "asgpp" : "white";
    r.metric_mean = std::exp(20.0 * (rng.uniform() - 0.5));
    r.metric_stderr = r.metric_mean * rng.uniform();
    r.energy = 1000.0 * rng.uniform();
    r.trials = 1 + int(1000 * rng.uniform());
    r.seed = rng.raw();
    rows.push_back(r);
  }
  TempFile f("roundtrip.csv");
  emit_csv(rows, f.path);
  auto back = parse_csv(f.path);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].x == rows[i].x);
    CHECK(back[i].scheme == rows[i].scheme);
    CHECK(back[i].metric_mean == rows[i].metric_mean);
    CHECK(back[i].metric_stderr == rows[i].metric_stderr);
    CHECK(back[i].energy == rows[i].energy);
    CHECK(back[i].trials == rows[i].trials);
    CHECK(back[i].seed == rows[i].seed);
  }
}

TEST_CASE("csv emits a bare header for an empty curve") {
  TempFile f("empty.csv");
  emit_csv({}, f.path);
  CHECK(slurp(f.path) == "x,scheme,metric_mean,metric_stderr,energy,trials,seed\n");
}

TEST_CASE("csv surfaces unwritable paths") {
  CHECK_THROWS_WITH_AS(emit_csv({}, "/nonexistent/dir/out.csv"),
                       doctest::Contains("/nonexistent/dir/out.csv"),
                       std::runtime_error);
  CHECK_THROWS_AS(parse_csv("/nonexistent/dir/in.csv"), std::runtime_error);
}

TEST_CASE("qpsk roundtrip is exact without noise") {
  StreamRng rng(102, 0, Stream::Generic);
  CMatrix H = rng.gauss_matrix(2, 2);
  CMatrix S_R = exponential_corr(2, cplx(0.9, 0.0));
  std::vector<int> bits(400);
  for (int& b : bits) b = rng.uniform() < 0.5;
  StreamRng noise(103, 0, Stream::DataNoise);
  CHECK(qpsk_roundtrip(bits, H, H, 1.0, 0.0, S_R, noise) == 0);
}

TEST_CASE("qpsk roundtrip saturates at coin flipping under huge noise") {
  StreamRng rng(104, 0, Stream::Generic);
  CMatrix H = rng.gauss_matrix(2, 2);
  CMatrix S_R = exponential_corr(2, cplx(0.9, 0.0));
  std::vector<int> bits(40000);
  for (int& b : bits) b = rng.uniform() < 0.5;
  StreamRng noise(105, 0, Stream::DataNoise);
  double ber =
      double(qpsk_roundtrip(bits, H, H, 1.0, 1e8, S_R, noise)) / bits.size();
  CHECK(std::abs(ber - 0.5) < 0.02);
}

TEST_CASE("qpsk roundtrip matches the scalar channel error rate") {
  CMatrix H = CMatrix::Identity(1, 1);
  CMatrix S_R = CMatrix::Identity(1, 1);
  StreamRng rng(106, 0, Stream::Generic);
  for (double snr_db : {0.0, 6.0, 10.0}) {
    double sigma2 = std::pow(10.0, -snr_db / 10.0);
    std::vector<int> bits(60000);
    for (int& b : bits) b = rng.uniform() < 0.5;
    StreamRng noise(107, 0, Stream::DataNoise,
                    static_cast<std::uint64_t>(snr_db * 10));
    double ber = double(qpsk_roundtrip(bits, H, H, 1.0, sigma2, S_R, noise)) /
                 bits.size();
    // Each rail is binary antipodal at amplitude sqrt(1/2), noise sigma2/2.
    double expected = oracles::qfunc(std::sqrt(1.0 / sigma2));
    double se = std::sqrt(expected * (1.0 - expected) / bits.size());
    CHECK(std::abs(ber - expected) < 3.0 * se + 1e-9);
  }
}

TEST_CASE("qpsk roundtrip validates the bit count") {
  CMatrix H = CMatrix::Identity(2, 2);
  StreamRng noise(108, 0, Stream::DataNoise);
  std::vector<int> odd(6, 0);
  CHECK_THROWS_AS(qpsk_roundtrip(odd, H, H, 1.0, 0.1, H, noise),
                  DimensionError);
  std::vector<int> none;
  CHECK_THROWS_AS(qpsk_roundtrip(none, H, H, 1.0, 0.1, H, noise),
                  DimensionError);
}

TEST_CASE("experiment output is deterministic and thread count invariant") {
  ExperimentConfig cfg = default_config("nmse");
  cfg.trials = 40;
  cfg.gamma_grid_db = {-5.0, 5.0};

  ExperimentResult a = run_experiment(cfg);
  ExperimentResult b = run_experiment(cfg);
  cfg.threads = 4;
  ExperimentResult c = run_experiment(cfg);

  TempFile fa("det_a.csv"), fb("det_b.csv"), fc("det_c.csv");
  emit_csv(a.rows, fa.path);
  emit_csv(b.rows, fb.path);
  emit_csv(c.rows, fc.path);
  CHECK(slurp(fa.path) == slurp(fb.path));
  CHECK(slurp(fa.path) == slurp(fc.path));
  CHECK(slurp(fa.path).size() > 100);
}

TEST_CASE("different seeds move the Monte Carlo answer") {
  ExperimentConfig cfg = default_config("nmse");
  cfg.trials = 20;
  cfg.gamma_grid_db = {0.0};
  ExperimentResult a = run_experiment(cfg);
  cfg.seed = 2;
  ExperimentResult b = run_experiment(cfg);
  CHECK(a.rows[0].metric_mean != b.rows[0].metric_mean);
}

TEST_CASE("every scheme sees the same training energy") {
  ExperimentConfig cfg = default_config("nmse");
  cfg.trials = 10;
  cfg.gamma_grid_db = {-5.0, 0.0, 5.0};
  ExperimentResult r = run_experiment(cfg);
  for (double x : cfg.gamma_grid_db) {
    const CurveRow* ref = find_row(r, x, "asgpp");
    REQUIRE(ref != nullptr);
    for (const char* s : {"cmse", "white"}) {
      const CurveRow* row = find_row(r, x, s);
      REQUIRE(row != nullptr);
      CHECK(row->energy == ref->energy);
    }
  }
}

TEST_CASE("estimation accuracy improves with the accuracy demand") {
  ExperimentConfig cfg = default_config("nmse");
  cfg.trials = 200;
  ExperimentResult r = run_experiment(cfg);
  const CurveRow* prev = nullptr;
  for (double x : cfg.gamma_grid_db) {
    const CurveRow* row = find_row(r, x, "asgpp");
    REQUIRE(row != nullptr);
    if (prev) {
      double slack = 2.0 * std::hypot(prev->metric_stderr,
                                      row->metric_stderr);
      CHECK(row->metric_mean <= prev->metric_mean + slack);
    }
    prev = row;
  }
}

TEST_CASE("scheme filter trims the emitted rows") {
  ExperimentConfig cfg = default_config("nmse");
  cfg.trials = 8;
  cfg.gamma_grid_db = {0.0};
  cfg.schemes = {"white"};
  ExperimentResult r = run_experiment(cfg);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].scheme == "white");
}

TEST_CASE("sample sets line up with the emitted rows") {
  ExperimentConfig cfg = default_config("nmse");
  cfg.trials = 12;
  cfg.gamma_grid_db = {0.0, 6.0};
  ExperimentResult r = run_experiment(cfg);
  REQUIRE(r.samples.size() == r.rows.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(r.samples[i].x == r.rows[i].x);
    CHECK(r.samples[i].scheme == r.rows[i].scheme);
    REQUIRE(r.samples[i].values.size() == 12);
    double mean = 0.0;
    for (double v : r.samples[i].values) mean += v;
    mean /= 12.0;
    CHECK(oracles::rel_err(mean, r.rows[i].metric_mean) < 1e-12);
  }
}

TEST_CASE("run_experiment validates before running") {
  ExperimentConfig cfg = default_config("zf");
  cfg.n_r = 2;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}
