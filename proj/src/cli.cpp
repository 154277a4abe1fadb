#include "noncoh/cli.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "noncoh/asymptotics.hpp"
#include "noncoh/channel_io.hpp"
#include "noncoh/errors.hpp"
#include "noncoh/firm_bounds.hpp"
#include "noncoh/prediction.hpp"
#include "noncoh/rate_oracle.hpp"

namespace noncoh::cli {
namespace {

struct Context {
  std::optional<ChannelSpec> channel;
  double rho = 1.0;
  double beta = 1.0;
  std::optional<double> lambda;
  std::optional<std::vector<double>> d;
  int n = 8;
  double a = 0.5;
  std::string law = "uniform";
  int m = 64;
  int history = 64;
};

const ScalarFadingSpec& scalar(const Context& c) {
  if (!c.channel) throw UsageError("this quantity needs --channel");
  if (const auto* s = std::get_if<ScalarFadingSpec>(&*c.channel)) return *s;
  throw UsageError("this quantity needs a scalar channel");
}

MimoFadingSpec mimo(const Context& c) {
  if (!c.channel) throw UsageError("this quantity needs --channel");
  if (const auto* m = std::get_if<MimoFadingSpec>(&*c.channel)) return *m;
  if (const auto* s = std::get_if<ScalarFadingSpec>(&*c.channel)) {
    return MimoFadingSpec::transmit_separable({1.0}, {*s});
  }
  throw UsageError("this quantity needs a MIMO or scalar channel");
}

const DelaySpreadSpec& delay(const Context& c) {
  if (!c.channel) throw UsageError("this quantity needs --channel");
  if (const auto* d = std::get_if<DelaySpreadSpec>(&*c.channel)) return *d;
  throw UsageError("this quantity needs a delay_spread channel");
}

// lambda from --lambda (or a lambda sweep) when given, else from the channel.
double unit_lambda(const Context& c) {
  if (c.lambda) return *c.lambda;
  const auto& s = scalar(c);
  if (std::abs(s.r0() - 1.0) > 1e-12) throw SpecError("asymptote needs a unit-variance channel");
  return s.lambda();
}

InputLaw input_law(const Context& c) {
  if (c.law == "fsk") return InputLaw::fsk(c.m, c.n, c.a);
  if (c.law == "psk") return InputLaw::psk(c.m, c.n, c.a);
  if (c.law == "uniform") return InputLaw::uniform_phase(c.n, c.a);
  if (c.law == "storm") return InputLaw::storm(c.m, c.n, c.a);
  throw UsageError("--law must be fsk, psk, uniform or storm");
}

PowerBudget budget(const Context& c) { return PowerBudget::make(c.rho, c.beta); }

using Quantity = std::function<double(const Context&)>;

const std::map<std::string, Quantity>& quantities() {
  static const std::map<std::string, Quantity> table{
      {"lambda", [](const Context& c) { return scalar(c).lambda(); }},
      {"r0", [](const Context& c) { return scalar(c).r0(); }},
      {"is_ephemeral", [](const Context& c) { return is_ephemeral(scalar(c)) ? 1.0 : 0.0; }},
      {"i_of_rho", [](const Context& c) { return i_of_rho(scalar(c), c.rho); }},
      {"sigma2", [](const Context& c) { return sigma2_of_rho(scalar(c), c.rho).sigma2; }},
      {"finite_history_error",
       [](const Context& c) {
         if (c.history < 1) throw UsageError("--history must be >= 1");
         const std::vector<std::complex<double>> z(static_cast<std::size_t>(c.history), 1.0);
         return finite_history_error(scalar(c), c.rho, z);
       }},
      {"u_siso", [](const Context& c) { return u_siso(scalar(c), budget(c)); }},
      {"u_siso_numeric", [](const Context& c) { return u_siso_numeric(scalar(c), budget(c)).value; }},
      {"u_mimo_sum", [](const Context& c) { return u_mimo_sum(mimo(c), budget(c)).value; }},
      {"u_mimo_individual",
       [](const Context& c) { return u_mimo_individual(mimo(c), budget(c), c.d).value; }},
      {"c_siso", [](const Context& c) { return c_siso(unit_lambda(c), c.beta).value; }},
      {"c_iid",
       [](const Context& c) {
         if (!c.lambda) return c_iid(scalar(c), c.beta).value;
         return c_iid(*c.lambda, c.beta).value;
       }},
      {"c_psk", [](const Context& c) { return c_psk(unit_lambda(c)); }},
      {"c_mimo_sum", [](const Context& c) { return c_mimo_sum(mimo(c), c.beta).value; }},
      {"c_mimo_sum_separable",
       [](const Context& c) { return c_mimo_sum_separable(mimo(c), c.beta).value; }},
      {"c_mimo_individual_separable",
       [](const Context& c) { return c_mimo_individual_separable(mimo(c), c.beta).value; }},
      {"c_mimo_individual_box",
       [](const Context& c) { return c_mimo_individual_box(mimo(c), c.beta, c.d).upper; }},
      {"c_mimo_loose_upper",
       [](const Context& c) { return *c_mimo_individual_box(mimo(c), c.beta, c.d, true).loose_upper; }},
      {"c_mimo_loose_lower",
       [](const Context& c) { return *c_mimo_individual_box(mimo(c), c.beta, c.d, true).loose_lower; }},
      {"c_delay_spread_separable",
       [](const Context& c) { return c_delay_spread_separable(delay(c), c.beta).value; }},
      {"large_beta_limit", [](const Context& c) { return large_beta_limit(scalar(c), c.rho); }},
      {"lambda_n", [](const Context& c) { return lambda_n(scalar(c), c.n); }},
      {"second_order_mi",
       [](const Context& c) {
         if (!c.channel) throw UsageError("this quantity needs --channel");
         const InputLaw law = input_law(c);
         return std::visit([&](const auto& spec) { return second_order_mi(spec, law).coeff; },
                           *c.channel);
       }},
      {"qpsk_L", [](const Context& c) { return qpsk_conditional_mi_L(scalar(c), c.rho); }},
      {"capacity_lower_bound",
       [](const Context& c) { return capacity_lower_bound(scalar(c), budget(c)); }},
  };
  return table;
}

const Quantity& quantity(const std::string& name) {
  const auto& table = quantities();
  const auto it = table.find(name);
  if (it == table.end()) throw UsageError("unknown quantity \"" + name + "\"");
  return it->second;
}

unsigned thread_count() {
  const char* env = std::getenv("NONCOH_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0) throw UsageError("NONCOH_THREADS must be a nonnegative integer");
  return v == 0 ? 1U : static_cast<unsigned>(std::min<long>(v, 256));
}

// Evaluates fn(i) for i < count, possibly concurrently; results keep index order
// and the error of the lowest failing index is rethrown.
std::vector<std::vector<double>> parallel_rows(std::size_t count,
                                               const std::function<std::vector<double>(std::size_t)>& fn) {
  std::vector<std::vector<double>> rows(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        rows[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::min<unsigned>(thread_count(), static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::string csv(const std::vector<std::string>& header, const std::vector<double>& grid,
                const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) out += (k ? "," : "") + header[k];
  out += '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out += format_number(grid[i]);
    for (double v : rows[i]) out += "," + format_number(v);
    out += '\n';
  }
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc{} || res.ptr != item.data() + item.size()) {
      throw UsageError("cannot parse number \"" + item + "\"");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> make_grid(const std::string& values, const std::string& range, bool log) {
  std::vector<double> grid;
  if (!values.empty()) {
    grid = parse_list(values);
  } else if (!range.empty()) {
    std::string spec = range;
    std::replace(spec.begin(), spec.end(), ':', ',');
    const auto parts = parse_list(spec);
    if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2])) {
      throw UsageError("--range takes lo:hi:count");
    }
    const double lo = parts[0], hi = parts[1];
    const int count = static_cast<int>(parts[2]);
    if (log && !(lo > 0.0 && hi > 0.0)) throw UsageError("a log range needs positive ends");
    for (int k = 0; k < count; ++k) {
      const double f = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
      grid.push_back(log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
    }
  } else {
    throw UsageError("sweep needs --values or --range");
  }
  if (grid.empty()) throw UsageError("sweep grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw UsageError("sweep grid must be strictly increasing");
  }
  return grid;
}

void set_variable(Context& c, const std::string& var, double v) {
  if (var == "rho") c.rho = v;
  else if (var == "beta") c.beta = v;
  else if (var == "lambda") c.lambda = v;
  else if (var == "a") c.a = v;
  else if (var == "n") c.n = static_cast<int>(v);
  else throw UsageError("--var must be rho, beta, lambda, a or n");
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

struct Check {
  std::string name;
  std::function<std::optional<std::string>()> run;  // nullopt on pass
};

std::optional<std::string> near(double got, double want, double tol) {
  if (std::abs(got - want) <= tol) return std::nullopt;
  std::ostringstream os;
  os << "got " << format_number(got) << ", want " << format_number(want);
  return os.str();
}

std::vector<Check> selfchecks() {
  const auto gm5 = ScalarFadingSpec::gauss_markov(0.5);
  const auto gm9 = ScalarFadingSpec::gauss_markov(0.9);
  return {
      {"prediction_identity",
       [=]() -> std::optional<std::string> {
         for (double rho : {1e-6, 1e-3, 1.0, 100.0}) {
           const auto p = sigma2_of_rho(gm9, rho);
           if (auto e = near(std::log1p(rho * p.sigma2), p.i_rho, 1e-12)) return e;
         }
         return std::nullopt;
       }},
      {"u_siso_closed_vs_numeric",
       [=] {
         const PowerBudget b{0.5, 2.0};
         return near(u_siso(gm5, b), u_siso_numeric(gm5, b).value, 1e-10);
       }},
      {"mimo_reduces_to_siso",
       [=]() -> std::optional<std::string> {
         const PowerBudget b{1.0, 1.0};
         const auto m = MimoFadingSpec::transmit_separable({1.0}, {gm5});
         if (auto e = near(u_mimo_sum(m, b).value, u_siso(gm5, b), 1e-12)) return e;
         return near(u_mimo_individual(m, b).value, u_siso(gm5, b), 1e-12);
       }},
      {"asymptote_triple_point",
       [] {
         const double v = c_siso(2.0, 1.0).value;
         if (v != 0.5 || c_iid(2.0, 1.0).value != 0.5 || c_psk(2.0) != 0.5) {
           return std::optional<std::string>("asymptotes differ at lambda = 2");
         }
         return std::optional<std::string>();
       }},
      {"delay_spread_matches_miso",
       [=] {
         const auto base = ScalarFadingSpec::gauss_markov(0.8);
         const double ds = c_delay_spread_separable(DelaySpreadSpec::delay_separable({1.0, 0.5}, base), 1.0).value;
         const double mi = c_mimo_individual_separable(MimoFadingSpec::transmit_separable({1.0, 0.5}, {base}), 1.0).value;
         return near(ds, mi, 1e-12);
       }},
      {"second_order_trace",
       [=] {
         const auto r = second_order_mi(gm5, InputLaw::fsk(16, 16, 0.5));
         return near(r.coeff, 0.5 * (0.5 * lambda_n(gm5, 16) - 0.25), 1e-10);
       }},
      {"history_m1",
       [=] {
         const std::complex<double> z[1] = {1.0};
         return near(finite_history_error(gm9, 2.0, z), 1.0 - 2.0 * 0.81 / 3.0, 1e-12);
       }},
      {"separable_sum_asymptote",
       [=] {
         const auto m = MimoFadingSpec::transmit_separable({1.0, 0.7}, {gm5, gm9});
         return near(c_mimo_sum(m, 1.5).value, c_mimo_sum_separable(m, 1.5).value, 1e-10);
       }},
      {"qpsk_rate_below_upper",
       [=]() -> std::optional<std::string> {
         const PowerBudget b{1.0, 1.0};
         const double lo = qpsk_conditional_mi_L(gm9, 1.0), up = u_siso(gm9, b);
         if (lo <= up) return std::nullopt;
         return "L " + format_number(lo) + " exceeds U " + format_number(up);
       }},
  };
}

int selfcheck(std::ostream& out) {
  int failed = 0;
  for (const auto& c : selfchecks()) {
    std::optional<std::string> res;
    try {
      res = c.run();
    } catch (const std::exception& e) {
      res = std::string("threw: ") + e.what();
    }
    if (res) {
      ++failed;
      out << "FAIL " << c.name << ": " << *res << '\n';
    } else {
      out << "PASS " << c.name << '\n';
    }
  }
  return failed == 0 ? 0 : 1;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::usage: return 2;
    case ErrorKind::numeric: return 4;
    default: return 3;
  }
}

void report(std::ostream& err, const char* kind, int code, const std::string& msg) {
  std::string quoted;
  for (char ch : msg) {
    if (ch == '"' || ch == '\\') quoted += '\\';
    quoted += ch == '\n' ? ' ' : ch;
  }
  err << "error: kind=" << kind << " code=" << code << " message=\"" << quoted << "\"\n";
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string figure_csv(const std::string& name, int points) {
  if (name == "fig1" || name == "fig2") {
    const bool first = name == "fig1";
    const double beta = first ? 1.5 : 1.0;
    const int last = first ? 400 : 150;  // lambda = 1 + k/100
    std::vector<double> grid;
    std::vector<std::vector<double>> rows;
    for (int k = 0; k <= last; ++k) {
      const double lam = (100.0 + k) / 100.0;
      grid.push_back(lam);
      std::vector<double> row{c_siso(lam, beta).value, c_iid(lam, beta).value};
      if (!first) row.push_back(c_psk(lam));
      rows.push_back(std::move(row));
    }
    return csv(first ? std::vector<std::string>{"lambda", "c_siso", "c_iid"}
                     : std::vector<std::string>{"lambda", "c_siso", "c_iid", "c_psk"},
               grid, rows);
  }
  if (name == "fig3") {
    const int count = points > 0 ? points : 20;
    const auto spec = ScalarFadingSpec::gauss_markov(0.99);
    std::vector<double> grid;
    for (int k = 0; k < count; ++k) {
      grid.push_back(count == 1 ? 0.01 : 0.01 * std::pow(1000.0, static_cast<double>(k) / (count - 1)));
    }
    const auto rows = parallel_rows(grid.size(), [&](std::size_t i) {
      const PowerBudget b{grid[i], 10.0};
      return std::vector<double>{u_siso(spec, b), capacity_lower_bound(spec, b)};
    });
    return csv({"rho", "u_siso", "capacity_lower_bound"}, grid, rows);
  }
  throw UsageError("figure must be fig1, fig2 or fig3");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capacity bounds and low-SNR asymptotes for noncoherent Rayleigh fading (all rates in nats)"};
  app.require_subcommand(1);

  Context ctx;
  std::string channel_path, op, d_text, out_path;
  std::optional<double> lambda_opt;
  const auto add_common = [&](CLI::App* s) {
    s->add_option("--channel", channel_path, "Channel JSON file");
    s->add_option("--rho", ctx.rho, "Peak SNR");
    s->add_option("--beta", ctx.beta, "Peak-to-average ratio");
    s->add_option("--lambda", lambda_opt, "Use this lambda for c_siso, c_iid, c_psk");
    s->add_option("--d", d_text, "Noise split d_1,...,d_nt");
    s->add_option("--n", ctx.n, "Block length");
    s->add_option("--a", ctx.a, "On-probability");
    s->add_option("--law", ctx.law, "Input phase law: fsk, psk, uniform, storm");
    s->add_option("--m", ctx.m, "Constellation size");
    s->add_option("--history", ctx.history, "Prediction history length");
  };

  auto* eval = app.add_subcommand("eval", "Evaluate one quantity");
  add_common(eval);
  eval->add_option("--op", op, "Quantity name")->required();

  auto* sweep = app.add_subcommand("sweep", "Evaluate quantities over a grid, as CSV");
  add_common(sweep);
  std::string ops_text, var = "rho", values, range;
  bool log = false;
  sweep->add_option("--ops", ops_text, "Comma-separated quantity names")->required();
  sweep->add_option("--var", var, "Grid variable: rho, beta, lambda, a, n");
  sweep->add_option("--values", values, "Comma-separated grid");
  sweep->add_option("--range", range, "lo:hi:count");
  sweep->add_flag("--log", log, "Geometric spacing for --range");
  sweep->add_option("--out", out_path, "CSV path (default stdout)");

  auto* figure = app.add_subcommand("figure", "Emit the curves of a figure as CSV");
  std::string fig;
  int points = 0;
  figure->add_option("name", fig, "fig1, fig2 or fig3")->required();
  figure->add_option("--points", points, "Grid size for fig3 (default 20)");
  figure->add_option("--out", out_path, "CSV path (default stdout)");

  auto* check = app.add_subcommand("selfcheck", "Run the cross-module identity suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    report(err, "usage", 2, e.what());
    return 2;
  }

  try {
    if (!channel_path.empty()) ctx.channel = load_channel(channel_path);
    ctx.lambda = lambda_opt;
    if (!d_text.empty()) ctx.d = parse_list(d_text);
    if (*eval) {
      out << format_number(quantity(op)(ctx)) << '\n';
      return 0;
    }
    if (*sweep) {
      std::vector<std::string> names;
      std::stringstream ss(ops_text);
      for (std::string item; std::getline(ss, item, ',');) {
        quantity(item);
        names.push_back(item);
      }
      if (names.empty()) throw UsageError("--ops is empty");
      const auto grid = make_grid(values, range, log);
      const auto rows = parallel_rows(grid.size(), [&](std::size_t i) {
        Context local = ctx;
        set_variable(local, var, grid[i]);
        std::vector<double> row;
        for (const auto& name : names) row.push_back(quantity(name)(local));
        return row;
      });
      std::vector<std::string> header{var};
      header.insert(header.end(), names.begin(), names.end());
      write_output(csv(header, grid, rows), out_path, out);
      return 0;
    }
    if (*figure) {
      write_output(figure_csv(fig, points), out_path, out);
      return 0;
    }
    if (*check) return selfcheck(out);
  } catch (const NumericError& e) {
    report(err, "numeric", 4, std::string(e.what()) + " (best value " + format_number(e.best_value()) + ")");
    return 4;
  } catch (const Error& e) {
    const int code = exit_code(e.kind());
    report(err, to_string(e.kind()), code, e.what());
    return code;
  } catch (const std::exception& e) {
    report(err, "numeric", 4, e.what());
    return 4;
  }
  return 2;
}

}  // namespace noncoh::cli
