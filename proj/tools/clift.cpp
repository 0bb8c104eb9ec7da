#include <cstdio>
#include <fstream>
#include <limits>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "concavelift.h"

namespace {

using json = nlohmann::json;

constexpr int kExitParse = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    std::exit(kExitParse);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct OperatorHandle {
  clift_operator* op = nullptr;
  ~OperatorHandle() { clift_operator_free(op); }
};

struct ResultString {
  char* s = nullptr;
  ~ResultString() { clift_string_free(s); }
};

int fail_with(clift_status st) {
  std::cerr << "error [" << clift_last_error_code() << "]: " << clift_last_error() << "\n";
  return static_cast<int>(st);
}

clift_operator* load_operator(const std::string& path) {
  std::string text = read_file(path);
  clift_operator* op = nullptr;
  clift_status st = clift_operator_from_json(text.c_str(), &op);
  if (st != CLIFT_OK) std::exit(fail_with(st));
  return op;
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload << "\n";
  } else {
    std::ofstream out(out_path);
    out << payload << "\n";
  }
}

double residual_of(const json& c) {
  // non-finite residuals serialize as null
  return c["residual"].is_number() ? c["residual"].get<double>()
                                   : std::numeric_limits<double>::quiet_NaN();
}

void print_clauses(const json& result) {
  for (const auto& c : result["clauses"])
    std::printf("  %-48s %-5s residual %.3e\n", c["id"].get<std::string>().c_str(),
                c["verdict"].get<bool>() ? "pass" : "fail", residual_of(c));
  for (const auto& n : result.value("notes", json::array()))
    std::printf("  note: %s\n", n.get<std::string>().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"concavelift: 2-isometric liftings, Cauchy duals and classifications\n"
               "of concave operators on truncated towers"};
  app.require_subcommand(1);

  std::string input, out_path, method = "basic", theorem = "2.3", gen_name, gen_params = "{}";
  std::string majorant_path;
  double tol = 1e-8;
  int margin = 0, order = 4, depth = 8, samples = 50;
  long seed = 1;
  bool json_out = false, include_matrices = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", tol, "tolerance")->envname("CONCAVELIFT_TOL");
    sub->add_option("--margin", margin, "window margin")->envname("CONCAVELIFT_MARGIN");
    sub->add_flag("--json", json_out, "emit the full JSON report");
    sub->add_option("--out", out_path, "write output to a file");
  };

  CLI::App* classify = app.add_subcommand("classify", "run all class predicates");
  classify->add_option("input", input, "operator spec file")->required();
  classify->add_option("--order", order, "hyperexpansivity profile order");
  add_common(classify);

  CLI::App* lift = app.add_subcommand("lift", "construct a 2-isometric lifting");
  lift->add_option("input", input, "operator spec file")->required();
  lift->add_option("--method", method, "basic | minimal | regular");
  lift->add_option("--depth", depth, "lifting tower depth");
  lift->add_option("--majorant", majorant_path, "majorant matrix JSON (minimal method)");
  lift->add_flag("--matrices", include_matrices, "include matrices in the JSON output");
  add_common(lift);

  CLI::App* verify = app.add_subcommand("verify", "run a theorem suite");
  verify->add_option("input", input, "operator spec file")->required();
  verify->add_option("--theorem", theorem, "2.3 | 3.1 | 3.3 | 3.4 | 4.1 | 4.4b | 4.6");
  verify->add_option("--order", order, "bracket order / mmax / nmax");
  verify->add_option("--depth", depth, "lifting depth (theorem 2.3)");
  verify->add_option("--samples", samples, "sample count (theorem 3.1)");
  verify->add_option("--seed", seed, "random seed")->envname("CONCAVELIFT_SEED");
  add_common(verify);

  CLI::App* generate = app.add_subcommand("generate", "emit a generated operator spec");
  generate->add_option("name", gen_name, "generator name")->required();
  generate->add_option("--params", gen_params, "generator parameters as JSON");
  generate->add_option("--seed", seed, "random seed")->envname("CONCAVELIFT_SEED");
  generate->add_option("--out", out_path, "write output to a file");

  CLI11_PARSE(app, argc, argv);

  if (generate->parsed()) {
    json p = json::parse(gen_params, nullptr, false);
    if (p.is_discarded()) {
      std::cerr << "error: --params is not valid JSON\n";
      return kExitParse;
    }
    json req{{"name", gen_name}, {"params", p}, {"seed", seed}};
    ResultString res;
    clift_status st = clift_generate(req.dump().c_str(), &res.s);
    if (st != CLIFT_OK) return fail_with(st);
    emit(res.s, out_path);
    return 0;
  }

  OperatorHandle op;
  op.op = load_operator(input);

  json params{{"tol", tol}, {"margin", margin}, {"order", order}};
  ResultString res;
  clift_status st = CLIFT_OK;
  if (classify->parsed()) {
    st = clift_classify(op.op, params.dump().c_str(), &res.s);
  } else if (lift->parsed()) {
    params["method"] = method;
    params["depth"] = depth;
    params["include_matrices"] = include_matrices;
    if (!majorant_path.empty())
      params["majorant"] = json::parse(read_file(majorant_path));
    st = clift_lift(op.op, params.dump().c_str(), &res.s);
  } else {
    params["theorem"] = theorem;
    params["depth"] = depth;
    params["samples"] = samples;
    params["seed"] = seed;
    st = clift_verify(op.op, params.dump().c_str(), &res.s);
  }

  if (res.s == nullptr) return fail_with(st);

  if (json_out) {
    emit(res.s, out_path);
  } else {
    json report = json::parse(res.s);
    const json& result = report["result"];
    if (classify->parsed()) {
      for (const auto& p : result["predicates"])
        std::printf("  %-40s %-5s residual %.3e\n", p["id"].get<std::string>().c_str(),
                    p["verdict"].get<bool>() ? "true" : "false", residual_of(p));
      std::printf("covariance %.12g\n", result["covariance"].get<double>());
    } else if (lift->parsed()) {
      std::printf("tag %s\n", result["tag"].get<std::string>().c_str());
      for (const auto& r : result["residuals"])
        std::printf("  %-40s %.3e\n", r["id"].get<std::string>().c_str(), residual_of(r));
      std::printf("covariance %.12g\n", result["covariance"].get<double>());
    } else {
      std::printf("theorem %s\n", result["theorem"].get<std::string>().c_str());
      print_clauses(result);
      std::printf("agreement %s\n", result["agreement"].get<bool>() ? "true" : "false");
    }
    if (!out_path.empty()) emit(res.s, out_path);
  }
  return static_cast<int>(st);
}
