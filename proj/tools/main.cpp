#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"

#include "elldiff/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact elliptic difference-module toolkit. Reads one JSON request and writes one JSON response."};
  std::string in_path, out_path;
  double tol = 0;
  int cutoff = 0, order = 0;
  app.add_option("--in", in_path, "request file (default: standard input)");
  app.add_option("--out", out_path, "response file (default: standard output)");
  auto* tol_opt = app.add_option("--tol", tol, "absolute tolerance (numeval only)");
  auto* cutoff_opt = app.add_option("--cutoff", cutoff, "lattice row cutoff (numeval only)");
  auto* order_opt = app.add_option("--order", order, "series truncation order where applicable");
  CLI11_PARSE(app, argc, argv);

  elldiff::cli::Options opts;
  if (*tol_opt) opts.tol = tol;
  if (*cutoff_opt) opts.cutoff = cutoff;
  if (*order_opt) opts.order = order;

  std::string text;
  if (in_path.empty()) {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream f(in_path);
    if (!f) {
      std::cerr << "cannot read " << in_path << "\n";
      return 2;
    }
    text.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }

  elldiff::cli::Outcome out = elldiff::cli::run_text(text, opts);
  std::string rendered = elldiff::cli::render(out.response);
  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    f << rendered;
  }
  return out.exit_code;
}
