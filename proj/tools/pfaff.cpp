// Command-line front end.
//
//   pfaff run FILE|-                  run the tasks of a document
//   pfaff <command> [args] -i FILE    run one task against FILE's declarations
//   pfaff basis 3 1 2
//   pfaff selftest --repro --seed 7

#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "pfaff/io/runner.hpp"

namespace {

std::string read_source(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path);
  if (!in) throw pfaff::invalid_input("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Global {
  std::string json_path;
  bool bases = false;
  bool repro = false;
  std::uint64_t seed = 0;
  std::string cache;
  std::string format = "json";
  std::string input;
};

}  // namespace

int main(int argc, char** argv) {
  using namespace pfaff::io;
  CLI::App app{"Pfaff systems on projective space: twisted forms, ideals, first-order deformations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Global g;
  app.add_option("--json", g.json_path, "Also write the JSON report to PATH");
  app.add_option("--format", g.format, "Output format on stdout")->check(CLI::IsMember({"json", "table"}));
  app.add_flag("--bases", g.bases, "Include basis coefficient vectors");
  app.add_flag("--repro", g.repro, "Omit timing so output is byte-reproducible");
  app.add_option("--seed", g.seed, "Seed for probes and the self test");
  app.add_option("--cache", g.cache, "Directory for the persistent basis cache");
  app.add_option("-i,--input", g.input, "Document with declarations ('-' for stdin)");

  std::string run_path;
  auto* run = app.add_subcommand("run", "Run all tasks of a document");
  run->add_option("file", run_path, "Document path or '-'")->required();

  struct Single {
    std::string name;
    std::vector<std::string> args;
    std::optional<long long> twist, rank, trials, seed;
  };
  std::vector<std::unique_ptr<Single>> singles;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"basis", "Descended slot dimension: [n] k e"},
      {"frobenius", "Integrability of NAME"},
      {"wedge-top", "Top wedge and singular scheme of NAME"},
      {"saturate", "Ideal and saturation slots: NAME k e"},
      {"tangent", "Tangent space of a single form: NAME [--twist e]"},
      {"tangent-system", "Tangent space of a Pfaff system: NAME"},
      {"homij", "Hom(I_j, I) and Hom(I_j, Omega/I): PARTS j"},
      {"hypb", "Surjectivity onto Hom(I_j, Omega/I): PARTS j"},
      {"sumdim", "Sum-component dimension report: PARTS"},
      {"relations", "Relations among ideal slots: PARTS k e"},
      {"probe-sing", "Codimension-2 probe: NAME [--trials T] [--seed S]"},
      {"selftest", "Seeded property suite"}};
  for (const auto& [name, help] : commands) {
    auto s = std::make_unique<Single>();
    s->name = name;
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("args", s->args, "Task arguments; lists as [A,B]");
    if (name == "tangent") sub->add_option("--twist", s->twist, "Twist e'");
    if (name == "saturate") sub->add_option("--rank", s->rank, "Rank override");
    if (name == "probe-sing") sub->add_option("--trials", s->trials, "Number of random lines");
    if (name == "probe-sing" || name == "selftest") sub->add_option("--seed", s->seed, "Seed");
    singles.push_back(std::move(s));
  }

  CLI11_PARSE(app, argc, argv);

  try {
    std::string source;
    InputDocument doc;
    if (*run) {
      source = read_source(run_path);
      doc = parse_document(source);
    } else {
      const Single* chosen = nullptr;
      for (const auto& s : singles)
        if (app.got_subcommand(s->name)) chosen = s.get();
      source = g.input.empty() ? std::string() : read_source(g.input);
      std::string line = chosen->name;
      for (const auto& a : chosen->args) line += " " + a;
      auto opt = [&](const char* key, const std::optional<long long>& v) {
        if (v) line += std::string(" --") + key + " " + std::to_string(*v);
      };
      opt("twist", chosen->twist);
      opt("rank", chosen->rank);
      opt("trials", chosen->trials);
      opt("seed", chosen->seed);
      doc = parse_document(source);
      doc.tasks = {pfaff::io::detail::parse_task(line, 1)};
      source = print_document(doc);
    }

    pfaff::Workspace ws;
    if (!g.cache.empty()) ws.attach_store(std::make_shared<DiskStore>(g.cache));
    Runner runner(doc, source, RunOptions{g.bases, g.repro, g.seed}, ws);
    const RunResult res = runner.run();
    if (!g.json_path.empty()) {
      std::ofstream out(g.json_path);
      if (!out) throw pfaff::invalid_input("cannot write '" + g.json_path + "'");
      out << res.report.dump(2) << '\n';
    }
    if (g.format == "json")
      std::cout << res.report.dump(2) << '\n';
    else
      std::cout << render_table(res.report);
    if (res.exit_code != exit_ok) std::cerr << "pfaff: " << res.error << '\n';
    return res.exit_code;
  } catch (const pfaff::invalid_input& e) {
    std::cerr << "pfaff: " << e.what() << '\n';
    return exit_invalid_input;
  } catch (const std::exception& e) {
    std::cerr << "pfaff: " << e.what() << '\n';
    return exit_invalid_input;
  }
}
