// Runs the nine acceptance checks and prints one PASS/FAIL line for each.
// Exit status is 0 only if all pass.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "nabla/corpus.hpp"
#include "nabla/fuzz.hpp"
#include "nabla/gen.hpp"
#include "nabla/kernel.hpp"
#include "nabla/random.hpp"
#include "nabla/semantics.hpp"

using namespace nabla;

namespace {

const std::string kCorpus = NABLA_CORPUS_DIR;
constexpr std::uint64_t kSeed = 7;

struct Outcome {
  bool pass;
  std::string detail;
};

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string secs(double s) {
  std::ostringstream o;
  o.precision(3);
  o << s << "s";
  return o.str();
}

FuzzReport fuzz(Lemma l, std::size_t samples) {
  FuzzOptions o;
  o.lemma = l;
  o.samples = samples;
  o.seed = kSeed;
  return run_fuzz(o);
}

std::string tally(const FuzzReport& r) {
  return std::to_string(r.checks - r.failures) + "/" + std::to_string(r.checks);
}

Outcome corpus() {
  CorpusReport r = run_corpus(kCorpus);
  bool ok = r.seconds < 2.0;
  std::size_t good = 0;
  for (const auto& e : r.entries) good += e.ok();
  for (const auto& e : r.tautologies) good += e.ok();
  ok = ok && good == r.entries.size() + r.tautologies.size() && r.entries.size() == 8 &&
       r.tautologies.size() == 3;
  return {ok, std::to_string(good) + "/" + std::to_string(r.entries.size() + r.tautologies.size()) +
                  " accepted, closed, LTL; " + secs(r.seconds)};
}

Outcome mutations() {
  CorpusReport r = run_corpus(kCorpus);
  if (!r.manifest_error.empty()) return {false, r.manifest_error};
  std::size_t good = 0;
  std::string bad;
  for (const auto& m : r.mutations) {
    if (m.ok()) ++good;
    else if (bad.empty()) bad = "; " + m.name + " gave " + m.actual;
  }
  return {good == r.mutations.size() && r.mutations.size() >= 9,
          std::to_string(good) + "/" + std::to_string(r.mutations.size()) +
              " rejected as expected" + bad};
}

Outcome translation() {
  auto t0 = std::chrono::steady_clock::now();
  FuzzReport r = fuzz(Lemma::Translation, 1000);
  double s = since(t0);
  return {r.ok() && r.checks == 1000 && s < 10.0, tally(r) + "; " + secs(s)};
}

Outcome prefix_independence() {
  FuzzReport a = fuzz(Lemma::Last, 1000);
  FuzzReport b = fuzz(Lemma::Corollary, 1000);
  return {a.ok() && b.ok() && a.checks == 1000 && b.checks == 1000,
          "last " + tally(a) + ", corollary " + tally(b)};
}

Outcome locality() {
  FuzzReport r = fuzz(Lemma::LastLocal, 500);
  return {r.ok() && r.checks == 1000, tally(r) + " (500 per clause)"};
}

Outcome quantifier_bound() {
  FuzzReport r = fuzz(Lemma::QuantifierBound, 10000);
  return {r.ok() && r.checks == 10000, tally(r)};
}

Outcome soundness() {
  std::size_t n = 0, good = 0;
  std::string bad;
  std::uint64_t i = 0;
  for (const auto& [name, d] : corpus_proofs(kCorpus)) {
    CheckReport r = check(d);
    std::vector<Generic> prem(r.open_assumptions.begin(), r.open_assumptions.end());
    auto cx = falsify_consequence(prem, Generic{*r.conclusion}, 200, sample_seed(kSeed, i++));
    ++n;
    if (r.accepted && !cx) ++good;
    else if (bad.empty()) bad = "; " + name;
  }
  FuzzReport f = fuzz(Lemma::Soundness, 50);
  bool ok = good == n && f.ok() && f.checks == 50;
  return {ok, "corpus " + std::to_string(good) + "/" + std::to_string(n) + ", random " + tally(f) + bad};
}

Outcome closure() {
  ClosureTrialReport r = run_closure_trials(kCorpus, 100, kSeed);
  return {r.ok() && r.trials == 100,
          std::to_string(r.passed) + "/" + std::to_string(r.trials) +
              (r.failures.empty() ? "" : "; " + r.failures.front())};
}

std::string capture(const std::string& cmd) {
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int status = pclose(p);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) out += "<exit " + std::to_string(status) + ">";
  return out;
}

Outcome determinism() {
  std::string cmd = std::string(NABLA_BIN) + " fuzz --lemma translation --samples 500 --seed 42 --json";
  std::string a = capture(cmd);
  std::string b = capture(cmd);
  std::string c = capture(cmd + " --serial");
  bool ok = !a.empty() && a == b && a == c;
  return {ok, ok ? std::to_string(a.size()) + " bytes, identical across runs and --serial"
                 : "reports differ"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> checks[] = {
      {"corpus reproduction", corpus},
      {"negative suite", mutations},
      {"translation property", translation},
      {"prefix independence", prefix_independence},
      {"locality in the last elements", locality},
      {"G quantifier bound", quantifier_bound},
      {"statistical soundness", soundness},
      {"closure executability", closure},
      {"fuzz determinism", determinism},
  };
  int failed = 0;
  int k = 0;
  for (const auto& [name, fn] : checks) {
    ++k;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << k << " " << name << ": " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
