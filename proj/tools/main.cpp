#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lattice_calderon/io.hpp"
#include "lattice_calderon/reconstruction.hpp"
#include "lattice_calderon/rng.hpp"

using namespace lc;
using nlohmann::json;

namespace {

struct MediumSource {
  std::string material_path;
  std::vector<int> size{3, 3, 3};
  std::uint64_t seed = 1;
  bool complex_medium = false;
  std::optional<double> lambda_re, lambda_im;

  void add_options(CLI::App* app, bool file_allowed = true) {
    if (file_allowed) app->add_option("--material", material_path, "material JSON file (overrides --size/--seed)");
    app->add_option("--size", size, "paving sizes R1,R2,R3")->delimiter(',')->expected(3);
    app->add_option("--seed", seed, "seed of the random medium");
    app->add_flag("--complex", complex_medium, "draw entries from the complex annulus 0.5 <= |z| <= 2");
    app->add_option("--lambda-re", lambda_re, "real part of lambda");
    app->add_option("--lambda-im", lambda_im, "imaginary part of lambda");
  }

  MaterialFile load() const {
    MaterialFile mf;
    if (!material_path.empty()) {
      mf = load_material(material_path);
    } else {
      if (size.size() != 3) throw ValidationError("--size needs three entries");
      SplitMix64 rng(seed);
      mf.material = random_material(Paving(size[0], size[1], size[2]), rng,
                                    complex_medium ? MediumKind::ComplexAnnulus : MediumKind::Real);
    }
    if (lambda_re) mf.lambda.real(*lambda_re);
    if (lambda_im) mf.lambda.imag(*lambda_im);
    if (mf.lambda == cdouble(0)) throw ValidationError("lambda must be nonzero");
    return mf;
  }
};

json complex_json(cdouble z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json report_json(const ReconstructionReport& r) {
  json planes = json::array();
  for (const auto& s : r.planes)
    planes.push_back({{"p", s.p},
                      {"tau", s.tau},
                      {"tau_prime", s.tau_prime},
                      {"escalations", s.escalations},
                      {"min_divisor_ratio", std::isfinite(s.min_divisor_ratio) ? json(s.min_divisor_ratio) : json()},
                      {"min_det_ratio", std::isfinite(s.min_det_ratio) ? json(s.min_det_ratio) : json()},
                      {"entries_added", s.entries_added}});
  return {{"planes", planes},
          {"touched_columns", r.touched_columns.size()},
          {"completion_residual", r.completion_residual},
          {"self_check_residual", r.self_check_residual},
          {"self_check_ok", r.self_check_ok}};
}

ReconstructionOptions options_from(double tau, bool partial) {
  ReconstructionOptions o;
  o.tau = tau;
  o.partial_data = partial;
  return o;
}

int finish(const json& report, bool ok) {
  std::cout << report.dump(2) << '\n';
  return ok ? 0 : 2;
}

double random_unit(SplitMix64& rng) { return rng.uniform(-1.0, 1.0); }

// ---- verify suites -------------------------------------------------------------------------

int suite_relations(const Paving& paving, std::uint64_t seed, double tau) {
  SplitMix64 rng(seed);
  const MaterialTensor m = draw_admissible_material(paving, rng, MediumKind::Real, 1.0);
  const DiagonalPotential V = potential_from_material(m, 1.0);
  const PotentialLookup lk = lookup_of(V);
  std::map<std::string, double> worst;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= paving.R1 + paving.R2; ++p) {
    const SpecialParams sp{p, tau, 0};
    const Field v = compute_v(lk, sp, paving);
    for (const auto& [k, r] : verify_relations(v, lk, sp, paving).residual) worst[k] = std::max(worst[k], r);
    min_ratio = std::min(min_ratio, check_nonvanishing(v, sp, paving).min_ratio);
  }
  double mx = 0;
  for (const auto& [k, r] : worst) mx = std::max(mx, r);
  const bool ok = mx <= 1e-9;
  return finish({{"suite", "relations"}, {"ok", ok}, {"max_residual", mx}, {"residuals", worst},
                 {"min_v3_ratio", min_ratio}},
                ok);
}

int suite_propagation(const Paving& paving, std::uint64_t seed, double tau) {
  SplitMix64 rng(seed);
  const MaterialTensor m = draw_admissible_material(paving, rng, MediumKind::Real, 1.0);
  const DiagonalPotential V = potential_from_material(m, 1.0);
  const PotentialLookup lk = lookup_of(V);
  long nonzero = 0, checked = 0;
  for (int p = 1; p <= paving.R1 + paving.R2 + 1; ++p) {
    const Field w = compute_w(lk, {p, tau, 0}, paving);
    for (int n1 = 1; n1 <= paving.R1; ++n1)
      for (int n2 = 1; n2 <= paving.R2; ++n2)
        for (int n3 = 1; n3 <= paving.R3; ++n3) {
          const Point3 n{n1, n2, n3};
          for (Fld f : {Fld::E, Fld::H}) {
            if (plane_index(n) < p)
              for (int c = 0; c < 3; ++c, ++checked) nonzero += w.get(f, c, n) != cdouble(0);
            if (plane_index(n) == p) ++checked, nonzero += w.get(f, 2, n) != cdouble(0);
          }
        }
  }
  const BoundaryBasis basis(paving);
  TangentialData f(Eigen::Index(basis.dim()));
  for (Eigen::Index k = 0; k < f.size(); ++k) f(k) = {random_unit(rng), random_unit(rng)};
  const Field u = solve_dirichlet(V, f);
  const CauchyData cd = cauchy_from_field(u, basis);
  double worst = 0;
  for (int q = 1; q <= paving.R1 + paving.R2 + 1; ++q) {
    const Field ub = propagate_backward(lk, BoundaryValuePacket(cd, q));
    for (std::size_t i = 0; i < paving.volume(); ++i) {
      const Point3 n = paving.site(i);
      for (Fld F : {Fld::E, Fld::H})
        for (int c = 0; c < 3; ++c)
          if (ub.defined(F, c, n))
            worst = std::max(worst, std::abs(ub.get(F, c, n) - u.get(F, c, n)) / std::max(1.0, std::abs(u.get(F, c, n))));
    }
  }
  const bool ok = nonzero == 0 && worst <= 1e-9;
  return finish({{"suite", "propagation"}, {"ok", ok}, {"zero_checks", checked}, {"nonzero_count", nonzero},
                 {"backward_max_error", worst}},
                ok);
}

int suite_oracle(const Paving& paving, std::uint64_t seed, double tau, bool partial, bool complex_medium) {
  SplitMix64 rng(seed);
  const MaterialTensor m = draw_admissible_material(
      paving, rng, complex_medium ? MediumKind::ComplexAnnulus : MediumKind::Real, 1.0);
  const DiagonalPotential V = potential_from_material(m, 1.0);
  const DtNMatrix dtn = assemble_dtn(V, 1.0);
  const DtNAccess access(dtn);
  std::optional<CompletionOperator> Q;
  if (!partial) Q.emplace(access);
  double measure_err = 0;
  for (int p = 1; p <= paving.R1 + paving.R2; ++p) {
    const SpecialParams sp{p, tau, (paving.R3 + 1) / 2};
    const CauchyData got = measure_v(access, Q ? &*Q : nullptr, sp);
    const CauchyData want = cauchy_from_field(compute_v(lookup_of(V), sp, paving), got.basis);
    const double scale = std::max(1.0, want.dirichlet.cwiseAbs().maxCoeff());
    measure_err = std::max(measure_err, (got.dirichlet - want.dirichlet).cwiseAbs().maxCoeff() / scale);
    measure_err = std::max(measure_err, (got.inner - want.inner).cwiseAbs().maxCoeff() / scale);
  }
  const auto r = reconstruct(dtn, options_from(tau, partial));
  const double err = material_max_relative_error(r.material, m);
  const bool ok = measure_err <= 1e-9 && err <= 1e-6 && r.report.self_check_ok;
  return finish({{"suite", "oracle"}, {"ok", ok}, {"measure_v_max_error", measure_err}, {"max_rel_err", err},
                 {"report", report_json(r.report)}},
                ok);
}

int suite_firewall(const Paving& paving, std::uint64_t seed, double tau, bool partial) {
  SplitMix64 rng(seed);
  const MaterialTensor m = draw_admissible_material(paving, rng, MediumKind::Real, 1.0);
  DiagonalPotential V = potential_from_material(m, 1.0);
  std::atomic<long> reads{0};
  V.attach_read_counter(&reads);
  const DtNMatrix dtn = assemble_dtn(V, 1.0);
  const long forward_reads = reads.load();
  reads = 0;
  const auto r = reconstruct(dtn, options_from(tau, partial));
  const long reconstruction_reads = reads.load();
  const BoundaryBasis basis(paving);
  std::size_t outside = 0;
  for (std::size_t k : r.report.touched_columns) outside += !in_partial_support(basis, k);
  const bool ok = reconstruction_reads == 0 && forward_reads > 0 && (!partial || outside == 0);
  return finish({{"suite", "firewall"}, {"ok", ok}, {"forward_reads", forward_reads},
                 {"reconstruction_reads", reconstruction_reads}, {"touched_columns", r.report.touched_columns.size()},
                 {"touched_outside_partial_support", outside}},
                ok);
}

int emit_error(const std::string& kind, const std::string& message, json extra = json::object()) {
  extra["status"] = "error";
  extra["kind"] = kind;
  extra["message"] = message;
  std::cerr << extra.dump() << '\n';
  return kind == "validation" ? 1 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Maxwell Calderon problem: forward DtN maps and direct reconstruction"};
  app.require_subcommand(1);

  MediumSource fwd_src;
  std::string fwd_out;
  auto* forward = app.add_subcommand("forward", "material -> DtN file");
  fwd_src.add_options(forward);
  forward->add_option("--out", fwd_out, "output DtN JSON")->required();

  std::string rec_in, rec_out;
  double rec_tau = 1.0;
  bool rec_partial = false;
  auto* recon = app.add_subcommand("reconstruct", "DtN file -> material file");
  recon->add_option("--dtn", rec_in, "input DtN JSON")->required();
  recon->add_option("--out", rec_out, "output material JSON")->required();
  recon->add_option("--tau", rec_tau, "first tau of the pair");
  recon->add_flag("--partial-data", rec_partial, "consume only columns on dOmega_1 and dOmega_2^+");

  MediumSource rt_src;
  double rt_tau = 1.0;
  bool rt_partial = false;
  auto* roundtrip = app.add_subcommand("roundtrip", "material -> DtN -> material, compare");
  rt_src.add_options(roundtrip);
  roundtrip->add_option("--tau", rt_tau, "first tau of the pair");
  roundtrip->add_flag("--partial-data", rt_partial, "partial-data reconstruction");

  MediumSource sp_src;
  double sp_min = 0.1, sp_max = 3.0;
  int sp_steps = 30;
  bool sp_eigen = false;
  std::string sp_out;
  auto* spectrum = app.add_subcommand("spectrum", "sigma_min over a lambda grid (CSV)");
  sp_src.add_options(spectrum);
  spectrum->add_option("--re-min", sp_min, "grid start (real part)");
  spectrum->add_option("--re-max", sp_max, "grid end (real part)");
  spectrum->add_option("--steps", sp_steps, "grid points")->check(CLI::PositiveNumber);
  spectrum->add_flag("--eigenvalues", sp_eigen, "list the Dirichlet eigenvalues instead of a grid");
  spectrum->add_option("--out", sp_out, "CSV output path (default stdout)");

  std::string v_suite;
  std::vector<int> v_size{3, 3, 3};
  std::uint64_t v_seed = 1;
  double v_tau = 1.0;
  bool v_partial = false, v_complex = false;
  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  verify->add_option("--suite", v_suite, "relations | propagation | oracle | firewall")
      ->required()
      ->check(CLI::IsMember({"relations", "propagation", "oracle", "firewall"}));
  verify->add_option("--size", v_size, "paving sizes R1,R2,R3")->delimiter(',')->expected(3);
  verify->add_option("--seed", v_seed, "seed");
  verify->add_option("--tau", v_tau, "tau");
  verify->add_flag("--partial-data", v_partial, "partial-data mode (oracle, firewall)");
  verify->add_flag("--complex", v_complex, "complex medium (oracle)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return emit_error("validation", e.what());
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();
    if (*forward) {
      const MaterialFile mf = fwd_src.load();
      const DtNMatrix dtn = assemble_dtn(potential_from_material(mf.material, mf.lambda), mf.lambda);
      save_dtn(fwd_out, dtn);
      std::cout << json{{"status", "ok"}, {"n_adm", dtn.L.rows()}, {"out", fwd_out}}.dump() << '\n';
      return 0;
    }
    if (*recon) {
      const DtNMatrix dtn = load_dtn(rec_in);
      const auto r = reconstruct(dtn, options_from(rec_tau, rec_partial));
      save_material(rec_out, r.material, dtn.lambda);
      json rep = report_json(r.report);
      rep["status"] = r.report.self_check_ok ? "ok" : "self_check_failed";
      rep["timing_seconds"] = seconds_since(t0);
      return finish(rep, r.report.self_check_ok);
    }
    if (*roundtrip) {
      MaterialFile mf = rt_src.load();
      if (rt_src.material_path.empty()) {
        SplitMix64 rng(rt_src.seed);
        mf.material = draw_admissible_material(mf.material.paving, rng,
                                               rt_src.complex_medium ? MediumKind::ComplexAnnulus : MediumKind::Real,
                                               mf.lambda);
      }
      const DiagonalPotential V = potential_from_material(mf.material, mf.lambda);
      const DirichletSolver solver(V);
      const DtNMatrix dtn = assemble_dtn(solver, mf.lambda);
      const auto r = reconstruct(dtn, options_from(rt_tau, rt_partial));
      const double err = material_max_relative_error(r.material, mf.material);
      json rep = report_json(r.report);
      rep["max_rel_err"] = err;
      rep["sigma_min"] = solver.singular_values().sigma_min;
      rep["sigma_max"] = solver.singular_values().sigma_max;
      rep["timing_seconds"] = seconds_since(t0);
      const bool ok = err <= 1e-6 && r.report.self_check_ok;
      rep["status"] = ok ? "ok" : "tolerance_exceeded";
      return finish(rep, ok);
    }
    if (*spectrum) {
      const MaterialFile mf = sp_src.load();
      std::ostringstream csv;
      if (sp_eigen) {
        csv << "lambda_re,lambda_im\n";
        csv.precision(17);
        // lambda = 0 is excluded from the problem; its (large) eigenspace is not reported.
        const auto ev = dirichlet_eigenvalues(mf.material);
        const double big = ev.empty() ? 0.0 : std::abs(ev.back());
        for (cdouble z : ev)
          if (std::abs(z) > 1e-8 * big) csv << z.real() << ',' << z.imag() << '\n';
      } else {
        const double im = mf.lambda.imag();
        csv << "lambda_re,lambda_im,sigma_min,sigma_max\n";
        csv.precision(17);
        for (int i = 0; i < sp_steps; ++i) {
          const double re = sp_steps == 1 ? sp_min : sp_min + (sp_max - sp_min) * i / (sp_steps - 1);
          if (cdouble(re, im) == cdouble(0)) continue;
          const auto A = assemble_dirichlet_system(potential_from_material(mf.material, {re, im})).A;
          const auto sv = estimate_singular_values(A);
          csv << re << ',' << im << ',' << sv.sigma_min << ',' << sv.sigma_max << '\n';
        }
      }
      if (sp_out.empty())
        std::cout << csv.str();
      else
        write_text_file(sp_out, csv.str());
      return 0;
    }
    if (*verify) {
      if (v_size.size() != 3) throw ValidationError("--size needs three entries");
      const Paving paving(v_size[0], v_size[1], v_size[2]);
      if (!(v_tau > 0)) throw ValidationError("tau must be positive");
      if (v_suite == "relations") return suite_relations(paving, v_seed, v_tau);
      if (v_suite == "propagation") return suite_propagation(paving, v_seed, v_tau);
      if (v_suite == "oracle") return suite_oracle(paving, v_seed, v_tau, v_partial, v_complex);
      return suite_firewall(paving, v_seed, v_tau, v_partial);
    }
  } catch (const SingularSystemError& e) {
    return emit_error("numerical", e.what(), {{"sigma_min", e.sigma_min}, {"norm", e.norm}});
  } catch (const TauExhaustedError& e) {
    return emit_error("numerical", e.what(), {{"plane", e.plane}});
  } catch (const NumericalError& e) {
    return emit_error("numerical", e.what());
  } catch (const ValidationError& e) {
    return emit_error("validation", e.what());
  } catch (const std::exception& e) {
    return emit_error("internal", e.what());
  }
  return 0;
}
