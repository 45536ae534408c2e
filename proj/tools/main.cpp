#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

using namespace twist;
using namespace twist::cli;

namespace {

struct Common {
  std::string format = "json";
  std::string h;
};

void add_output_flags(CLI::App *sub, RunConfig &cfg, Common &c) {
  sub->add_option("--format", c.format, "Report format: json (canonical) or csv (rows only)")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--output", cfg.output, "Write the report to this file instead of stdout");
  sub->add_option("--threads", cfg.threads, "Worker threads (default: logical cores)")
      ->check(CLI::Range(1u, 1024u));
}

void add_form_flags(CLI::App *sub, RunConfig &cfg, bool second) {
  sub->add_option("--form", cfg.form,
                  "Built-in form (level11, delta) or q-expansion file");
  if (second)
    sub->add_option("--form2", cfg.form2, "Second form g (default: g = f)");
  sub->add_option("--fetch-url", cfg.fetch_url,
                  "Download the q-expansion for --form from this http:// URL");
  sub->add_option("--coeffs", cfg.coeffs,
                  "Starting coefficient count (grown on demand for built-ins)")
      ->check(CLI::Range(static_cast<i64>(100), static_cast<i64>(40'000'000)));
  sub->add_option("--cache-dir", cfg.cache_dir, "Coefficient cache directory");
  sub->add_flag("--no-cache", cfg.no_cache, "Do not read or write the coefficient cache");
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Twisted central L-values over wild character orbits"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  RunConfig cfg;
  Common common;

  auto *chars = app.add_subcommand("characters", "Character table and wild characters mod p^h");
  bool list_wild = false;
  chars->add_option("--p", cfg.p, "Odd prime p")->required();
  chars->add_option("--h", common.h, "Exponent h >= 2")->required();
  chars->add_flag("--list-wild", list_wild, "List every wild character");
  add_output_flags(chars, cfg, common);

  auto *lval = app.add_subcommand("lvalue", "Central values L(1/2, f x chi)");
  bool all = false;
  int digits = 16;
  add_form_flags(lval, cfg, false);
  lval->add_option("--p", cfg.p, "Odd prime p");
  lval->add_option("--h", common.h, "h, a..b or a list; omit for L(1/2, f)");
  lval->add_flag("--all", all, "Every wild character instead of one per orbit");
  lval->add_option("--digits", digits, "Working precision: 16, 50 or 100");
  lval->add_option("--cutoff-scale", cfg.cutoff_scale, "AFE length multiplier in [1, 8]");
  add_output_flags(lval, cfg, common);

  auto *mom = app.add_subcommand("moment", "Orbit second moment against the main term");
  add_form_flags(mom, cfg, true);
  mom->add_option("--p", cfg.p, "Odd prime p")->required();
  mom->add_option("--h", common.h, "h, a..b or a list")->required();
  mom->add_option("--l1", cfg.l1, "Twist l1");
  mom->add_option("--l2", cfg.l2, "Twist l2");
  add_output_flags(mom, cfg, common);

  auto *tr = app.add_subcommand("trace", "Orbit traces of normalized |L_f(chi)|^2 chi(ell^t)");
  double c = 1.0;
  add_form_flags(tr, cfg, false);
  tr->add_option("--p", cfg.p, "Odd prime p")->required();
  tr->add_option("--h", common.h, "h, a..b or a list")->required();
  tr->add_option("--ell", cfg.ell, "Prime ell (1: unweighted)");
  tr->add_option("--t", cfg.t, "Exponent t");
  tr->add_option("--c", c, "Scalar c");
  add_output_flags(tr, cfg, common);

  auto *et = app.add_subcommand("errorterm", "Off-diagonal congruence sums");
  i64 xi_v = 0, xi_order_v = 0;
  bool keep_diag = false, allow_trunc = false;
  add_form_flags(et, cfg, true);
  et->add_option("--p", cfg.p, "Odd prime p")->required();
  et->add_option("--h", common.h, "h, a..b or a list")->required();
  et->add_option("--l1", cfg.l1, "Twist l1");
  et->add_option("--l2", cfg.l2, "Twist l2");
  auto *xi_opt = et->add_option("--xi", xi_v, "Unit xi (default: both of +1, -1)");
  auto *xo_opt = et->add_option("--xi-order", xi_order_v,
                                "Use the Teichmuller root of this order instead of --xi");
  et->add_flag("--keep-diagonal", keep_diag, "Keep the l1 m = l2 n terms");
  et->add_flag("--allow-truncation", allow_trunc,
               "Sum to the table length when the weight support is longer");
  add_output_flags(et, cfg, common);

  auto *lat = app.add_subcommand("lattice", "Congruence lattice laboratory");
  LatticeFlags lf;
  lat->add_option("--q", lf.q, "Modulus q")->required();
  lat->add_option("--l1", cfg.l1, "l1");
  lat->add_option("--l2", cfg.l2, "l2");
  lat->add_option("--xi", lf.xi, "Unit xi");
  lat->add_option("--samples", lf.samples, "Number of seeded box samples");
  lat->add_option("--seed", cfg.seed, "Sample seed");
  lat->add_option("--max-side", lf.max_side, "Largest box side");
  lat->add_option("--ball-T", lf.ball_T, "Ball radius for the point count");
  lat->add_option("--sieve-M", lf.sieve_M, "Sieve box M");
  lat->add_option("--sieve-N", lf.sieve_N, "Sieve box N");
  lat->add_option("--sieve-max-product", lf.sieve_max_product, "Largest d1 d2");
  lat->add_option("--weil-max", lf.weil_max, "Check the Weil bound for prime powers up to this");
  add_output_flags(lat, cfg, common);

  auto *st = app.add_subcommand("satotate", "Mean of |lambda_f(ell)| over primes");
  i64 z = 1'000'000;
  add_form_flags(st, cfg, false);
  st->add_option("--z", z, "Prime bound");
  add_output_flags(st, cfg, common);

  auto *rec = app.add_subcommand("recognize", "Algebraic recognition and generation certificates");
  RecognizeFlags rf;
  add_form_flags(rec, cfg, false);
  rec->add_option("--p", cfg.p, "Odd prime p (certificate mode)");
  rec->add_option("--h", common.h, "h, a..b or a list (certificate mode)");
  rec->add_option("--value", rf.value, "Decimal value to recognize");
  rec->add_option("--m", rf.m, "Recognize in Q(mu_m)^+");
  rec->add_option("--degree", rf.degree, "Recognize as a root of a degree-d polynomial");
  rec->add_flag("--rational", rf.rational, "Recognize as a rational");
  rec->add_option("--height", rf.height, "Height bound");
  add_output_flags(rec, cfg, common);

  auto *self = app.add_subcommand("selftest", "Run the invariant suite");
  self->add_option("--seed", cfg.seed, "Sample seed");
  self->add_option("--cache-dir", cfg.cache_dir, "Coefficient cache directory");
  self->add_flag("--no-cache", cfg.no_cache, "Do not read or write the coefficient cache");
  add_output_flags(self, cfg, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0)
      return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    cfg.format = common.format == "csv" ? Format::csv : Format::json;
    if (cfg.threads)
      set_default_threads(cfg.threads);
    if (!common.h.empty())
      cfg.hs = parse_h_range("--h", common.h);
    if (!cfg.fetch_url.empty())
      cfg.form = cfg.fetch_url;
    FormProvider forms(cfg, &std::clog);

    json report;
    if (*chars) {
      report = run_characters(cfg, list_wild);
    } else if (*lval) {
      if (!cfg.hs.empty() && lval->count("--p") == 0)
        throw FlagError("--p", "required with --h");
      report = run_lvalue(cfg, forms, all, digits);
    } else if (*mom) {
      report = run_moment(cfg, forms);
    } else if (*tr) {
      report = run_trace(cfg, forms, c);
    } else if (*et) {
      std::optional<i64> xi, xo;
      if (xi_opt->count())
        xi = xi_v;
      if (xo_opt->count())
        xo = xi_order_v;
      report = run_errorterm(cfg, forms, xi, xo, keep_diag, allow_trunc);
    } else if (*lat) {
      report = run_lattice(cfg, lf);
    } else if (*st) {
      report = run_satotate(cfg, forms, z);
    } else if (*rec) {
      if (rf.value.empty() && cfg.hs.empty())
        throw FlagError("--h", "certificate mode needs --p and --h (or give --value)");
      report = run_recognize(cfg, forms, rf);
    } else if (*self) {
      report = run_selftest(cfg, forms);
      emit(report, cfg);
      return report["summary"]["passed"].get<bool>() ? 0 : 2;
    }
    emit(report, cfg);
    return 0;
  } catch (const FlagError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ContractFailure &e) {
    std::cerr << "numerical contract failure: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::length_error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "numerical contract failure: " << e.what() << "\n";
    return 2;
  }
}
