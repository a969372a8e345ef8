#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "hyplab/errors.hpp"

namespace {

using namespace hyplab::cli;

int exit_code_for(const hyplab::Error& e) {
  switch (e.kind()) {
    case hyplab::ErrorKind::precondition:
    case hyplab::ErrorKind::domain:
      return 3;
    case hyplab::ErrorKind::invalid_spec:
      return 2;
    case hyplab::ErrorKind::overflow:
    case hyplab::ErrorKind::resource:
      return 4;
    case hyplab::ErrorKind::io:
      return 5;
  }
  return 5;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyplab: exact short-interval sums of arithmetic functions and their error envelopes"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI file of option defaults; command-line flags override it");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());

  GlobalConfig g;
  if (const char* env = std::getenv("HYPLAB_CACHE_DIR")) g.cache_dir = env;
  std::string format = "csv";
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--cache-dir", g.cache_dir, "directory for sieved windows (default $HYPLAB_CACHE_DIR)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", g.seed, "seed for randomized checks");
  app.add_option("--epsilon", g.epsilon, "epsilon of the x^eps and y^eps terms, in (0, 1/2]")
      ->check(CLI::Range(1e-9, 0.5));
  app.add_option("--work-cap", g.work_cap, "max tuples examined by one delta evaluation");

  // list options accept "a,b" as well as repeated values (INI files split on commas)
  auto add_list = [](CLI::App* sub, const std::string& name, auto& target, const std::string& help) {
    return sub
        ->add_option_function<std::vector<std::string>>(
            name,
            [&target](const std::vector<std::string>& parts) {
              std::string joined;
              for (const auto& p : parts) joined += (joined.empty() ? "" : ",") + p;
              target = joined;
            },
            help)
        ->delimiter(',')
        ->expected(0, CLI::detail::expected_max_vector_size);
  };

  auto add_entry_options = [](CLI::App* sub, EntryChoice& c) {
    sub->add_option("--entry,--function", c.name, "registry entry or function name (tau_k, tau_paren_k, ...)");
    sub->add_option("--k", c.k, "family parameter");
  };

  ShortsumArgs ss;
  auto* shortsum = app.add_subcommand("shortsum", "exact sum over (x, x+y] with main term and envelopes");
  add_entry_options(shortsum, ss.what);
  shortsum->add_option("--spec", ss.what.spec, "raw function spec such as tau_m(3) instead of an entry");
  shortsum->add_option("--x", ss.x, "left end x")->required();
  shortsum->add_option("--y", ss.y, "interval length y")->required();
  shortsum->add_option("--method", ss.method, "sieve, hyperbola or both comma separated");
  shortsum->add_option("--T", ss.T, "hyperbola cut point (default y e^{(log x)^{1/4}} clamped)");

  DeltaArgs da;
  auto* delta = app.add_subcommand("delta", "Hooley Delta_r(n) with a witness window");
  delta->add_option("--n", da.n, "n")->required();
  delta->add_option("--r", da.r, "r in 2..4");
  delta->add_option("--check-lemma5", da.lemma5_N, "also check the dyadic divisor inequality at N");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "experiment rows for a registry entry");
  add_entry_options(verify, va.what);
  add_list(verify, "--xgrid", va.xgrid, "ascending comma-separated x values")->required();
  verify->add_option("--y-rule", va.y_rule, "geomean, endpoints or list");
  add_list(verify, "--y", va.ys, "comma-separated y values for --y-rule list");

  EnvelopesArgs ea;
  auto* envelopes = app.add_subcommand("envelopes", "fitted constants of the error envelopes");
  envelopes->add_option("--which", ea.which, "prop1, lemma4, psi or lemma2")->required();
  envelopes->add_option("--m", ea.m, "divisor function index for prop1");
  envelopes->add_option("--r", ea.r, "r for lemma4");
  envelopes->add_option("--grid", ea.grid, "small or medium (prop1)");
  add_list(envelopes, "--x", ea.xs, "comma-separated x values");
  add_list(envelopes, "--H", ea.Hs, "comma-separated H values");
  envelopes->add_option("--points", ea.points, "grid size for psi");
  envelopes->add_option("--spec", ea.spec, "function for lemma2");

  auto* selftest = app.add_subcommand("selftest", "quick built-in consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  g.format = format == "json" ? Format::json : Format::csv;

  try {
    if (*shortsum) return cmd_shortsum(g, ss, std::cout);
    if (*delta) return cmd_delta(g, da, std::cout);
    if (*verify) return cmd_verify(g, va, std::cout);
    if (*envelopes) return cmd_envelopes(g, ea, std::cout);
    if (*selftest) return cmd_selftest(g, std::cout);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const hyplab::ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n(raise --work-cap or shrink the request)\n";
    return 4;
  } catch (const hyplab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 5;
  }
  return 5;
}
