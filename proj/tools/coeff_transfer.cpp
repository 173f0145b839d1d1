// coeff_transfer: fit OLS models via normal equations, move coefficients
// between nested models through predictor-on-subset regressions, and verify
// the underlying determinant identities in exact rational arithmetic.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ct/dataset.hpp"
#include "ct/exact.hpp"
#include "ct/generator.hpp"
#include "ct/moments.hpp"
#include "ct/ols.hpp"
#include "ct/parallel.hpp"
#include "ct/subset.hpp"
#include "ct/transfer.hpp"

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr int kVerifySubsetGuard = 10;
constexpr int kSweepSubsetGuard = 16;

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Exit contract: 0 all checks pass, 1 identity/verification failure,
// 2 input error, 3 capability guard.
int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ct::CapabilityExceeded*>(&e)) return 3;
  return 2;
}

json error_json(const std::exception& e) {
  json err{{"message", e.what()}};
  if (const auto* d = dynamic_cast<const ct::DataError*>(&e)) {
    static const char* kKinds[] = {"malformed_csv", "missing_response", "non_numeric_cell",
                                   "constant_column", "too_few_rows", "non_finite"};
    err["type"] = "data";
    err["kind"] = kKinds[static_cast<int>(d->kind)];
    if (d->row >= 0) err["row"] = d->row;
    if (!d->column.empty()) err["column"] = d->column;
  } else if (const auto* s = dynamic_cast<const ct::SingularSystem*>(&e)) {
    err["type"] = "singular_system";
    err["judged_by"] = s->by_exact_zero ? "exact_zero" : "float_rcond";
    err["det_estimate"] = s->det_estimate;
    err["rcond"] = s->rcond;
  } else if (dynamic_cast<const ct::SingularTransferMatrix*>(&e)) {
    err["type"] = "singular_transfer_matrix";
  } else if (dynamic_cast<const ct::CapabilityExceeded*>(&e)) {
    err["type"] = "capability_exceeded";
  } else if (dynamic_cast<const ct::FingerprintMismatch*>(&e)) {
    err["type"] = "fingerprint_mismatch";
  } else if (dynamic_cast<const ct::NonRepresentable*>(&e)) {
    err["type"] = "non_representable";
  } else if (dynamic_cast<const ct::SubsetError*>(&e)) {
    err["type"] = "subset";
  } else {
    err["type"] = "error";
  }
  return json{{"error", err}};
}

struct InputSpec {
  std::string csv_path;
  std::string response;
  std::vector<std::uint64_t> generate;  // seed n m

  bool generated() const { return !generate.empty(); }
};

ct::Dataset load_input(const InputSpec& in) {
  if (in.generated())
    return ct::make_synthetic(in.generate[0], static_cast<int>(in.generate[1]),
                              static_cast<int>(in.generate[2]));
  std::ifstream f(in.csv_path, std::ios::binary);
  if (!f)
    throw ct::DataError(ct::DataError::Kind::MalformedCsv,
                        "cannot open '" + in.csv_path + "'");
  return ct::load_csv(f, in.response);
}

json input_json(const InputSpec& in, const ct::Dataset& d) {
  json j{{"n", d.n()},
         {"m", d.m()},
         {"response", d.response_name},
         {"predictors", d.predictor_names},
         {"fingerprint", hex64(d.fingerprint())}};
  if (in.generated())
    j["generated"] = {{"seed", in.generate[0]}, {"n", in.generate[1]}, {"m", in.generate[2]}};
  else
    j["source"] = in.csv_path;
  return j;
}

// Accepts 1-based indices or predictor names, comma separated, any order.
ct::SubsetIndex parse_subset(const std::string& text, const ct::Dataset& d) {
  std::vector<int> idx;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = ct::detail::trim(tok);
    if (tok.empty()) throw ct::SubsetError("subset: empty entry in '" + text + "'");
    const bool numeric = std::all_of(tok.begin(), tok.end(),
                                     [](unsigned char c) { return std::isdigit(c); });
    if (numeric) {
      idx.push_back(std::stoi(tok));
    } else {
      int found = 0;
      for (std::size_t i = 0; i < d.predictor_names.size(); ++i)
        if (d.predictor_names[i] == tok) found = static_cast<int>(i) + 1;
      if (!found) throw ct::SubsetError("subset: unknown predictor '" + tok + "'");
      idx.push_back(found);
    }
  }
  std::sort(idx.begin(), idx.end());
  return ct::SubsetIndex(std::move(idx), static_cast<int>(d.n()));
}

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json full_model_json(const ct::FullModel& m) {
  return json{{"intercept", m.b0}, {"slopes", vector_json(m.b)}};
}

json submodel_json(const ct::SubModel& m) {
  return json{{"subset", m.subset.indices()}, {"intercept", m.a0}, {"slopes", vector_json(m.a)}};
}

json transfer_json(const ct::TransferMatrix& tm) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < tm.c.rows(); ++i) rows.push_back(vector_json(tm.c.row(i)));
  return json{{"subset", tm.subset.indices()}, {"intercepts", vector_json(tm.c0)},
              {"slopes", rows}};
}

json cramer_json(const ct::CramerSolution<double>& cr) {
  return json{{"delta", cr.delta}, {"column_determinants", vector_json(cr.column_dets)}};
}

// Intercept-plus-slopes agreement metric between two submodels.
double submodel_agreement(const ct::SubModel& a, const ct::SubModel& b) {
  Eigen::VectorXd va(a.a.size() + 1), vb(b.a.size() + 1);
  va(0) = a.a0;
  va.tail(a.a.size()) = a.a;
  vb(0) = b.a0;
  vb.tail(b.a.size()) = b.a;
  return ct::max_rel_diff(va, vb);
}

void emit(const json& report, bool as_json, const std::string& human) {
  if (as_json)
    std::cout << report.dump(2) << "\n";
  else
    std::cout << human;
}

// ---------------------------------------------------------------- fit ----

int run_fit(const InputSpec& in, const std::string& subset_text, bool as_json, int cramer_max) {
  const ct::Dataset d = load_input(in);
  const ct::Moments ms = ct::compute_moments(d);
  const ct::FullModel full = ct::fit_full(ms);

  json report{{"schema_version", kSchemaVersion}, {"command", "fit"}};
  report["input"] = input_json(in, d);
  report["full_model"] = full_model_json(full);
  if (ms.n + 1 <= cramer_max) {
    const auto sys = ct::assemble_system(ms, ct::SubsetIndex::full(static_cast<int>(ms.n)));
    try {
      report["full_model"]["cramer"] = cramer_json(ct::solve_cramer(sys, 0, cramer_max));
    } catch (const ct::SingularSystem&) {
    }
  }

  std::ostringstream human;
  human << "input: " << (in.generated() ? "generated" : in.csv_path) << "  (n=" << ms.n
        << ", m=" << d.m() << ", response=" << d.response_name << ")\n";
  human << "full model:\n  intercept  " << fmt_g(full.b0) << "\n";
  for (Eigen::Index i = 0; i < full.b.size(); ++i)
    human << "  " << d.predictor_names[static_cast<std::size_t>(i)] << "  " << fmt_g(full.b(i))
          << "\n";

  bool pass = true;
  if (!subset_text.empty()) {
    const ct::SubsetIndex subset = parse_subset(subset_text, d);
    const ct::TransferMatrix tm = ct::fit_transfer(ms, subset);
    const ct::SubModel direct = ct::fit_submodel(ms, subset);
    const ct::SubModel moved = ct::transfer_submodel(full, tm);
    const double agreement = submodel_agreement(direct, moved);
    pass = agreement <= ct::kRelTol;

    report["subset"] = subset.indices();
    report["transfer_matrix"] = transfer_json(tm);
    report["submodel_direct"] = submodel_json(direct);
    report["submodel_transferred"] = submodel_json(moved);
    report["agreement"] = {{"max_rel_diff", agreement}, {"pass", pass}};
    if (subset.k() + 1 <= cramer_max) {
      const auto sys = ct::assemble_system(ms, subset);
      try {
        report["submodel_direct"]["cramer"] = cramer_json(ct::solve_cramer(sys, 0, cramer_max));
      } catch (const ct::SingularSystem&) {
      }
    }

    human << "subset " << subset.to_string() << ":\n";
    human << "  transfer matrix (row per predictor, column per subset index):\n";
    for (Eigen::Index i = 0; i < tm.c.rows(); ++i) {
      human << "    " << d.predictor_names[static_cast<std::size_t>(i)]
            << ": c0=" << fmt_g(tm.c0(i)) << "  c=[";
      for (Eigen::Index jj = 0; jj < tm.c.cols(); ++jj)
        human << (jj ? ", " : "") << fmt_g(tm.c(i, jj));
      human << "]\n";
    }
    const auto print_sub = [&](const char* label, const ct::SubModel& s) {
      human << "  " << label << ": a0=" << fmt_g(s.a0) << "  a=[";
      for (Eigen::Index jj = 0; jj < s.a.size(); ++jj)
        human << (jj ? ", " : "") << fmt_g(s.a(jj));
      human << "]\n";
    };
    print_sub("submodel (direct)     ", direct);
    print_sub("submodel (transferred)", moved);
    human << "  max componentwise relative difference: " << fmt_g(agreement) << "\n";
  }

  emit(report, as_json, human.str());
  return pass ? 0 : 1;
}

// ------------------------------------------------------------- verify ----

struct LaplaceCheck {
  bool skipped = false;
  std::string reason;
  int order = 0;
  std::string sum;
  int candidate_count = 0;
  bool sum_zero = false;
  bool survivors_ok = false;
  bool weights_ok = false;

  bool pass() const { return skipped || (sum_zero && survivors_ok && weights_ok); }
};

LaplaceCheck check_laplace(const ct::RationalMatrix& coupling, int n, int k, int laplace_max) {
  LaplaceCheck c;
  c.order = static_cast<int>(coupling.rows());
  if (n < 2) {
    c.skipped = true;
    c.reason = "needs n >= 2";
    return c;
  }
  if (c.order > laplace_max) {
    c.skipped = true;
    c.reason = "order exceeds laplace_max";
    return c;
  }
  const auto expansion = ct::laplace_expand(coupling, n + 1, laplace_max);
  const auto candidates = ct::surviving_column_sets(n, k);
  c.sum = ct::to_string(expansion.sum);
  c.sum_zero = expansion.sum == 0;
  c.candidate_count = static_cast<int>(candidates.size());
  c.survivors_ok = true;
  for (const auto& term : expansion.terms) {
    if (term.product() == 0) continue;
    if (std::find(candidates.begin(), candidates.end(), term.beta) == candidates.end())
      c.survivors_ok = false;
  }
  c.weights_ok = static_cast<int>(candidates.size()) == n + 1;
  const auto weight_of = [](const std::vector<int>& b) {
    long long w = 0;
    for (int v : b) w += v;
    return w;
  };
  const long long base = static_cast<long long>(n + 1) * (n + 2) / 2;
  if (c.weights_ok) {
    c.weights_ok = weight_of(candidates[0]) == base && weight_of(candidates[1]) == base + 1;
    for (std::size_t t = 2; t < candidates.size() && c.weights_ok; ++t) {
      int missing = 0;  // the one element of 1..n+1 absent from the choice
      for (int v = 1; v <= n + 1; ++v)
        if (std::find(candidates[t].begin(), candidates[t].end(), v) == candidates[t].end())
          missing = v;
      c.weights_ok = weight_of(candidates[t]) ==
                     static_cast<long long>(n + 2) * (n + 3) / 2 - missing;
    }
  }
  return c;
}

struct VerifyCase {
  ct::SubsetIndex subset;
  double float_agreement = 0.0;
  bool float_pass = false;
  struct ExactCase {
    int j = 0;
    std::string coupling_det;
    bool coupling_pass = false;
    LaplaceCheck laplace;
    bool identity_determinant = false;
    bool identity_quotient = false;
    std::string slope;
  };
  std::vector<ExactCase> exact_cases;
};

int run_verify(const InputSpec& in, const std::string& subset_text, bool exact, bool as_json,
               int laplace_max, bool corrupt_entry) {
  const ct::Dataset d = load_input(in);
  const int n = static_cast<int>(d.n());
  if (subset_text.empty() && n > kVerifySubsetGuard)
    throw ct::CapabilityExceeded("verify: n = " + std::to_string(n) +
                                 " exceeds the all-subsets guard (" +
                                 std::to_string(kVerifySubsetGuard) +
                                 "); pass --subset to restrict the sweep");
  const ct::Moments ms = ct::compute_moments(d);
  const ct::FullModel full = ct::fit_full(ms);

  std::vector<ct::SubsetIndex> subsets;
  if (!subset_text.empty())
    subsets.push_back(parse_subset(subset_text, d));
  else
    subsets = ct::all_nonempty_subsets(n);

  std::optional<ct::ExactMoments> exact_ms;
  std::optional<ct::FullModelT<ct::Rational>> exact_full;
  if (exact) exact_ms = ct::to_rational(d);

  std::vector<VerifyCase> cases;
  cases.reserve(subsets.size());
  for (const auto& s : subsets) cases.push_back(VerifyCase{s});

  ct::parallel_for(cases.size(), [&](std::size_t idx) {
    VerifyCase& vc = cases[idx];
    const ct::TransferMatrix tm = ct::fit_transfer(ms, vc.subset);
    const ct::SubModel direct = ct::fit_submodel(ms, vc.subset);
    const ct::SubModel moved = ct::transfer_submodel(full, tm);
    vc.float_agreement = submodel_agreement(direct, moved);
    vc.float_pass = vc.float_agreement <= ct::kRelTol;
    if (!exact) return;
    for (int j = 1; j <= vc.subset.k(); ++j) {
      VerifyCase::ExactCase ec;
      ec.j = j;
      ct::RationalMatrix coupling = ct::coupling_matrix(*exact_ms, vc.subset, j);
      if (corrupt_entry) coupling(0, 0) += 1;  // test hook: breaks the structural zero
      const ct::Rational det = ct::det_exact(coupling);
      ec.coupling_det = ct::to_string(det);
      ec.coupling_pass = det == 0;
      ec.laplace = check_laplace(coupling, n, vc.subset.k(), laplace_max);
      const auto identity = ct::verify_transfer_identity(*exact_ms, vc.subset, j);
      ec.identity_determinant = identity.determinant_identity;
      ec.identity_quotient = identity.quotient_identity;
      ec.slope = ct::to_string(identity.slope_direct);
      vc.exact_cases.push_back(std::move(ec));
    }
  });

  long exact_checks = 0, exact_failures = 0, float_failures = 0;
  for (const auto& vc : cases) {
    if (!vc.float_pass) ++float_failures;
    for (const auto& ec : vc.exact_cases) {
      ++exact_checks;
      if (!(ec.coupling_pass && ec.laplace.pass() && ec.identity_determinant &&
            ec.identity_quotient))
        ++exact_failures;
    }
  }
  const bool pass = float_failures == 0 && exact_failures == 0;

  json report{{"schema_version", kSchemaVersion}, {"command", "verify"}};
  report["input"] = input_json(in, d);
  report["exact"] = exact;
  report["flags"] = {{"laplace_max", laplace_max}, {"corrupt_entry", corrupt_entry}};
  json jcases = json::array();
  for (const auto& vc : cases) {
    json jc{{"subset", vc.subset.indices()},
            {"float", {{"max_rel_diff", vc.float_agreement}, {"pass", vc.float_pass}}}};
    if (exact) {
      json jexact = json::array();
      for (const auto& ec : vc.exact_cases) {
        json je{{"j", ec.j},
                {"coupling", {{"determinant", ec.coupling_det}, {"pass", ec.coupling_pass}}},
                {"identity",
                 {{"determinant_form", ec.identity_determinant},
                  {"quotient_form", ec.identity_quotient},
                  {"slope", ec.slope}}}};
        if (ec.laplace.skipped) {
          je["laplace"] = {{"skipped", true}, {"reason", ec.laplace.reason},
                           {"order", ec.laplace.order}};
        } else {
          je["laplace"] = {{"sum", ec.laplace.sum},
                           {"candidate_count", ec.laplace.candidate_count},
                           {"sum_zero", ec.laplace.sum_zero},
                           {"survivors_within_candidates", ec.laplace.survivors_ok},
                           {"weights_match", ec.laplace.weights_ok},
                           {"pass", ec.laplace.pass()}};
        }
        jexact.push_back(std::move(je));
      }
      jc["exact_cases"] = std::move(jexact);
    }
    jcases.push_back(std::move(jc));
  }
  report["cases"] = std::move(jcases);
  report["summary"] = {{"subsets", cases.size()},
                       {"float_failures", float_failures},
                       {"exact_checks", exact_checks},
                       {"exact_failures", exact_failures},
                       {"pass", pass}};

  std::ostringstream human;
  human << "verify: n=" << n << ", m=" << d.m() << ", " << cases.size() << " subsets";
  if (exact) human << ", " << exact_checks << " exact checks";
  human << "\n";
  for (const auto& vc : cases) {
    if (!vc.float_pass)
      human << "  FAIL float " << vc.subset.to_string()
            << " max_rel_diff=" << fmt_g(vc.float_agreement) << "\n";
    for (const auto& ec : vc.exact_cases) {
      if (ec.coupling_pass && ec.laplace.pass() && ec.identity_determinant &&
          ec.identity_quotient)
        continue;
      human << "  FAIL exact " << vc.subset.to_string() << " j=" << ec.j
            << (ec.coupling_pass ? "" : " coupling-determinant") << (ec.laplace.pass() ? "" : " laplace")
            << (ec.identity_determinant ? "" : " determinant-identity")
            << (ec.identity_quotient ? "" : " quotient-identity") << "\n";
    }
  }
  human << (pass ? "all checks passed\n" : "FAILURES detected\n");

  emit(report, as_json, human.str());
  return pass ? 0 : 1;
}

// -------------------------------------------------------------- sweep ----

int run_sweep(const InputSpec& in, bool as_json) {
  const ct::Dataset d = load_input(in);
  const int n = static_cast<int>(d.n());
  if (n > kSweepSubsetGuard)
    throw ct::CapabilityExceeded("sweep: n = " + std::to_string(n) + " exceeds the guard (" +
                                 std::to_string(kSweepSubsetGuard) + ")");
  const ct::Moments ms = ct::compute_moments(d);
  const ct::FullModel full = ct::fit_full(ms);
  const auto subsets = ct::all_nonempty_subsets(n);

  struct Row {
    double a0 = 0.0;
    Eigen::VectorXd slopes;
    bool checked = false;
    double agreement = 0.0;
  };
  std::vector<Row> rows(subsets.size());
  ct::parallel_for(subsets.size(), [&](std::size_t i) {
    const ct::TransferMatrix tm = ct::fit_transfer(ms, subsets[i]);
    const ct::SubModel moved = ct::transfer_submodel(full, tm);
    rows[i].a0 = moved.a0;
    rows[i].slopes = moved.a;
    if (i % 10 == 0) {  // sampled 10%: direct refit oracle
      rows[i].checked = true;
      rows[i].agreement = submodel_agreement(ct::fit_submodel(ms, subsets[i]), moved);
    }
  });

  double worst_sampled = 0.0;
  long sampled = 0;
  for (const auto& r : rows)
    if (r.checked) {
      ++sampled;
      worst_sampled = std::max(worst_sampled, r.agreement);
    }

  const ct::PairwiseForm pw = ct::pairwise_full_form(ms);
  const bool pairwise_pass = pw.max_abs_deviation <= 1e-9;

  double recovery_rcond = 0.0, recovery_diff = 0.0;
  bool recovery_skipped = false, recovery_pass = true;
  {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(pw.c.transpose());
    recovery_rcond = lu.rcond();
    if (recovery_rcond < 1e-6) {
      recovery_skipped = true;  // too ill-conditioned for the round-trip bound
    } else {
      const Eigen::RowVectorXd b = ct::recover_full_from_pairwise(pw.a, pw.c);
      recovery_diff = ct::max_rel_diff(b.transpose(), full.b);
      recovery_pass = recovery_diff <= 1e-7;
    }
  }

  // One deterministic random disjoint partition, seeded from the input.
  std::mt19937_64 rng(d.fingerprint());
  std::vector<ct::SubsetIndex> parts;
  if (n == 1) {
    parts.emplace_back(std::vector<int>{1}, 1);
  } else {
    const int q = 2 + ct::detail::draw_int(rng, 0, std::min(n, 4) - 2);
    for (;;) {
      std::vector<std::vector<int>> buckets(static_cast<std::size_t>(q));
      for (int i = 1; i <= n; ++i)
        buckets[static_cast<std::size_t>(ct::detail::draw_int(rng, 0, q - 1))].push_back(i);
      if (std::any_of(buckets.begin(), buckets.end(),
                      [](const auto& b) { return b.empty(); }))
        continue;
      for (auto& b : buckets) parts.emplace_back(std::move(b), n);
      break;
    }
  }
  std::vector<ct::TransferMatrix> part_tms;
  for (const auto& p : parts) part_tms.push_back(ct::fit_transfer(ms, p));
  const Eigen::VectorXd concat = ct::partition_transfer(full, part_tms);
  double partition_diff = 0.0;
  {
    Eigen::Index at = 0;
    for (const auto& p : parts) {
      const ct::SubModel direct = ct::fit_submodel(ms, p);
      partition_diff = std::max(
          partition_diff, ct::max_rel_diff(concat.segment(at, p.k()), direct.a));
      at += p.k();
    }
  }
  const bool partition_pass = partition_diff <= ct::kRelTol;
  const bool sampled_pass = worst_sampled <= ct::kRelTol;
  const bool pass = pairwise_pass && recovery_pass && partition_pass && sampled_pass;

  json report{{"schema_version", kSchemaVersion}, {"command", "sweep"}};
  report["input"] = input_json(in, d);
  report["full_model"] = full_model_json(full);
  json jsubsets = json::array();
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    json js{{"subset", subsets[i].indices()},
            {"intercept", rows[i].a0},
            {"slopes", vector_json(rows[i].slopes)}};
    if (rows[i].checked) js["max_rel_diff"] = rows[i].agreement;
    jsubsets.push_back(std::move(js));
  }
  report["subsets"] = std::move(jsubsets);
  report["pairwise"] = {{"max_abs_deviation", pw.max_abs_deviation}, {"pass", pairwise_pass}};
  json jparts = json::array();
  for (const auto& p : parts) jparts.push_back(p.indices());
  report["partition"] = {{"parts", jparts},
                         {"max_rel_diff", partition_diff},
                         {"pass", partition_pass}};
  json jrecovery{{"rcond", recovery_rcond}, {"skipped", recovery_skipped}};
  if (!recovery_skipped) {
    jrecovery["max_rel_diff"] = recovery_diff;
    jrecovery["pass"] = recovery_pass;
  }
  report["recovery"] = std::move(jrecovery);
  report["sampled"] = {{"count", sampled},
                       {"worst_rel_diff", worst_sampled},
                       {"pass", sampled_pass}};
  report["summary"] = {{"subsets", subsets.size()}, {"pass", pass}};

  std::ostringstream human;
  human << "sweep: n=" << n << ", " << subsets.size() << " subsets (transfer only), " << sampled
        << " sampled against direct refits\n";
  human << "  worst sampled max_rel_diff: " << fmt_g(worst_sampled) << "\n";
  human << "  pairwise max |A - B*C|:     " << fmt_g(pw.max_abs_deviation) << "\n";
  if (recovery_skipped)
    human << "  recovery: skipped (rcond " << fmt_g(recovery_rcond) << " < 1e-6)\n";
  else
    human << "  recovery max_rel_diff:      " << fmt_g(recovery_diff) << "\n";
  human << "  partition";
  for (const auto& p : parts) human << " " << p.to_string();
  human << " max_rel_diff: " << fmt_g(partition_diff) << "\n";
  human << (pass ? "all checks passed\n" : "FAILURES detected\n");

  emit(report, as_json, human.str());
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OLS fitting and coefficient transfer between nested models"};
  app.require_subcommand(1);

  InputSpec fit_in, verify_in, sweep_in;
  std::string fit_subset, verify_subset;
  bool fit_json = false, verify_json = false, sweep_json = false;
  bool verify_exact = false, verify_corrupt = false;
  int cramer_max = ct::kDefaultCramerMax;
  int laplace_max = ct::kDefaultLaplaceMax;

  CLI::App* fit = app.add_subcommand("fit", "fit the full model and optionally one subset");
  fit->add_option("csv", fit_in.csv_path, "input CSV file")->required();
  fit->add_option("--response", fit_in.response, "response column name")->required();
  fit->add_option("--subset", fit_subset, "subset as 1-based indices or names, e.g. 1,3 or x1,x3");
  fit->add_flag("--json", fit_json, "emit the JSON report on stdout");
  fit->add_option("--cramer-max", cramer_max, "largest system dimension solved by Cramer's rule");

  CLI::App* verify = app.add_subcommand(
      "verify", "check the transfer identity over all subsets, optionally in exact arithmetic");
  verify->add_option("csv", verify_in.csv_path, "input CSV file");
  verify->add_option("--response", verify_in.response, "response column name");
  verify->add_option("--generate", verify_in.generate, "SEED N M: use a synthetic dataset")
      ->expected(3);
  verify->add_option("--subset", verify_subset, "restrict to one subset");
  verify->add_flag("--exact", verify_exact, "run the exact rational verification engine");
  verify->add_flag("--json", verify_json, "emit the JSON report on stdout");
  verify->add_option("--laplace-max", laplace_max, "largest order expanded by the Laplace check");
  verify->add_flag("--corrupt-entry", verify_corrupt)->group("");  // test hook

  CLI::App* sweep = app.add_subcommand("sweep", "transfer every subset from one full fit");
  sweep->add_option("csv", sweep_in.csv_path, "input CSV file")->required();
  sweep->add_option("--response", sweep_in.response, "response column name")->required();
  sweep->add_flag("--json", sweep_json, "emit the JSON report on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  const auto started = std::chrono::steady_clock::now();
  int code = 2;
  try {
    if (fit->parsed()) {
      code = run_fit(fit_in, fit_subset, fit_json, cramer_max);
    } else if (verify->parsed()) {
      if (verify_in.generated() == !verify_in.csv_path.empty()) {
        std::cerr << error_json(ct::Error("verify: pass either a CSV file or --generate")).dump()
                  << "\n";
        return 2;
      }
      if (!verify_in.csv_path.empty() && verify_in.response.empty()) {
        std::cerr << error_json(ct::Error("verify: --response is required with a CSV file")).dump()
                  << "\n";
        return 2;
      }
      code = run_verify(verify_in, verify_subset, verify_exact, verify_json, laplace_max,
                        verify_corrupt);
    } else if (sweep->parsed()) {
      code = run_sweep(sweep_in, sweep_json);
    }
  } catch (const std::exception& e) {
    std::cerr << error_json(e).dump() << "\n";
    return exit_code_for(e);
  }
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  std::cerr << "elapsed: " << elapsed.count() << " ms\n";
  return code;
}
