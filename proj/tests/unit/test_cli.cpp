#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "cli.hpp"
#include "doctest.h"
#include "toy_grammars.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
    int status;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "tagrank");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = tagrank::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("tagrank_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name) << text;
        return (path / name).string();
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<json> records(const std::string& path) {
    std::vector<json> out;
    std::istringstream in(slurp(path));
    for (std::string line; std::getline(in, line);) out.push_back(json::parse(line));
    return out;
}

const char* const ten_sentences = R"(the/D dog/N sleeps/V
dog/N runs/V
the/D cat/N sees/V a/D dog/N
dog/N runs/V quickly/Adv
the/D dog/N in/P the/D park/N sleeps/V
cat/N sees/V dog/N in/P park/N
a/D cat/N runs/V in/P the/D park/N
dog/N sees/V the/D cat/N quickly/Adv
the/D the/D
sleeps/V dog/N
)";

} // namespace

TEST_SUITE("cli") {

TEST_CASE("check") {
    TempDir t;
    const auto g = t.write("toy.grammar", toy::clauses);
    const auto ok = cli({"check", "--grammar", g});
    CHECK(ok.status == 0);
    CHECK(ok.out.find("8") != std::string::npos);
    const auto bad = cli({"check", "--grammar", t.write("bad.grammar", "tree Footless auxiliary : (VP V@)\n")});
    CHECK(bad.status != 0);
    CHECK(bad.err.find("Footless") != std::string::npos);
    const auto missing = cli({"check", "--grammar", t.file("nope.grammar")});
    CHECK(missing.status != 0);
    CHECK(missing.err.find("nope.grammar") != std::string::npos);
    CHECK(cli({"check"}).status != 0);
    CHECK(cli({}).status != 0);
}

TEST_CASE("parse reports coverage") {
    TempDir t;
    const auto g = t.write("toy.grammar", toy::clauses);
    const auto in = t.write("corpus.tagged", ten_sentences);
    const auto report = t.file("parse.jsonl");
    const auto r = cli({"parse", "--grammar", g, "--input", in, "--report", report});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("% Parsed") != std::string::npos);
    CHECK(r.out.find("80.00") != std::string::npos);
    const auto recs = records(report);
    REQUIRE(recs.size() == 12);
    CHECK(recs.front()["type"] == "config");
    CHECK(recs.front()["config"]["top_k"] == 6);
    const auto& summary = recs.back();
    CHECK(summary["type"] == "summary");
    CHECK(summary["% Parsed"] == 80.0);
    CHECK(summary["# of Sentences"] == 10);
    // counts per sentence agree with the parser run directly
    CHECK(recs[1]["parses"] == 1);
    CHECK(recs[9]["parsed"] == false);
    CHECK(recs[6]["parses"] == 2); // "cat sees dog in park": NP or VP attachment
    CHECK(recs[6]["ranked"][0]["bracketed"].get<std::string>().find("(NP (NP (N dog)) (PP") != std::string::npos);

    const auto empty = cli({"parse", "--grammar", g, "--input", t.write("empty.tagged", "")});
    CHECK(empty.status == 0);
    const auto unknown = cli({"parse", "--grammar", g, "--input", t.write("u.tagged", "wug/N sleeps/V\n"),
                              "--report", t.file("u.jsonl")});
    CHECK(unknown.status == 0);
    CHECK(records(t.file("u.jsonl"))[1]["parsed"] == false);
    CHECK(cli({"parse", "--grammar", g, "--input", t.file("absent.tagged")}).status != 0);
}

TEST_CASE("rank, then eval the report") {
    TempDir t;
    const auto g = t.write("toy.grammar", toy::clauses);
    const auto in = t.write("one.tagged", "cat/N sees/V dog/N in/P park/N\n");
    const auto report = t.file("rank.jsonl");
    const auto r = cli({"rank", "--grammar", g, "--input", in, "--report", report, "--top-k", "1"});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("1. score") != std::string::npos);
    const auto gold = t.write("gold.tb", "(S (NP (N cat)) (VP (V sees) (NP (NP (N dog)) (PP (P in) (NP (N park))))))\n");
    const auto e = cli({"eval", "--parses", report, "--gold", gold, "--aggregation", "first"});
    REQUIRE(e.status == 0);
    CHECK(e.out.find("Zero Crossing Bracket %") != std::string::npos);
    CHECK(e.out.find("100.00") != std::string::npos);
}

TEST_CASE("eval on plain bracketed files") {
    TempDir t;
    const auto same = t.write("c.tb", "(S (NP (D the) (N dog)) (VP (V barks) (ADV loudly)))\n");
    const auto r = cli({"eval", "--parses", same, "--gold", same, "--report", t.file("e.jsonl")});
    REQUIRE(r.status == 0);
    const auto s = records(t.file("e.jsonl")).back();
    CHECK(s["Zero Crossing Bracket %"] == 100.0);
    CHECK(s["Crossing Bracket Average"] == 0.0);
    CHECK(s["Recall %"] == 100.0);
    CHECK(s["Precision %"] == 100.0);

    const auto cand = t.write("ab_c.tb", "(X (X a b) c)\n");
    const auto gold = t.write("a_bc.tb", "(X a (X b c))\n");
    const auto x = cli({"eval", "--parses", cand, "--gold", gold, "--report", t.file("x.jsonl")});
    REQUIRE(x.status == 0);
    const auto xs = records(t.file("x.jsonl")).back();
    CHECK(xs["Zero Crossing Bracket %"] == 0.0);
    CHECK(xs["Crossing Bracket Average"] == 1.0);

    const auto two = t.write("two.tb", "(X a b)\n(X c d)\n");
    const auto mis = cli({"eval", "--parses", two, "--gold", gold});
    CHECK(mis.status != 0);
    const auto shorter = t.write("short.tb", "(X a b)\n");
    const auto len = cli({"eval", "--parses", shorter, "--gold", gold});
    CHECK(len.status != 0);
    CHECK(len.err.find("sentence 1") != std::string::npos);

    const auto np = t.write("np.tb", "[NP [G your] [N [N personal] [N computer]]]\n");
    const auto ibm = t.write("ibm.tb", "(NP your personal computer)\n");
    const auto f = cli({"eval", "--parses", np, "--gold", ibm, "--flatten", "NP,N", "--report", t.file("f.jsonl")});
    REQUIRE(f.status == 0);
    CHECK(records(t.file("f.jsonl")).back()["Av. # of Constituents/sent (candidate)"] == 0.0);
}

TEST_CASE("split") {
    TempDir t;
    const auto r = cli({"split", "--size", "931", "--proportions", "626,205,100", "--seed", "7", "--report",
                        t.file("s.jsonl")});
    REQUIRE(r.status == 0);
    const auto s = records(t.file("s.jsonl")).front();
    CHECK(s["train_ids"].size() == 626);
    CHECK(s["heldout_ids"].size() == 205);
    CHECK(s["test_ids"].size() == 100);
    CHECK(cli({"split", "--size", "2", "--proportions", "1,1,1"}).status != 0);
    CHECK(cli({"split", "--size", "9", "--proportions", "1,1"}).status != 0);
}

TEST_CASE("train writes weights, log and the results table") {
    TempDir t;
    const auto g = t.write("toy.grammar", toy::clauses);
    std::string tagged, gold;
    for (int i = 0; i < 4; ++i) {
        tagged += "cat/N sees/V dog/N in/P park/N\n";
        gold += "(S (NP (N cat)) (VP (VP (V sees) (NP (N dog))) (PP (P in) (NP (N park)))))\n";
        tagged += "dog/N runs/V quickly/Adv\n";
        gold += "(S (NP (N dog)) (VP (VP (V runs)) (ADV quickly)))\n";
    }
    const auto in = t.write("c.tagged", tagged), gb = t.write("c.tb", gold);
    auto run = [&](const std::string& log, const std::string& w) {
        return cli({"train", "--grammar", g, "--input", in, "--gold", gb, "--proportions", "4,2,2", "--seed", "3",
                    "--split-seed", "1", "--max-iterations", "60", "--log", log, "--out-weights", w, "--report",
                    t.file("train.jsonl")});
    };
    const auto a = run(t.file("a.log"), t.file("a.w"));
    REQUIRE(a.status == 0);
    CHECK(a.out.find("No heuristics") != std::string::npos);
    CHECK(a.out.find("No preference") != std::string::npos);
    CHECK(a.out.find("Preferences Trained") != std::string::npos);
    CHECK(a.out.find("HELD-OUT") != std::string::npos);
    const auto b = run(t.file("b.log"), t.file("b.w"));
    REQUIRE(b.status == 0);
    CHECK(slurp(t.file("a.log")) == slurp(t.file("b.log")));
    CHECK(slurp(t.file("a.w")) == slurp(t.file("b.w")));
    CHECK(slurp(t.file("a.w")).find("pp_attachment_height\t") != std::string::npos);

    const auto results = records(t.file("train.jsonl"));
    int rows = 0;
    for (const auto& rec : results)
        if (rec["type"] == "result") ++rows;
    CHECK(rows == 6);

    // resuming from a truncated log reproduces the full one
    std::istringstream full(slurp(t.file("a.log")));
    std::string head, line;
    std::getline(full, head);
    std::string prefix = head + "\n";
    for (int i = 0; i < 5 && std::getline(full, line); ++i)
        if (line.find("\"final\"") == std::string::npos) prefix += line + "\n";
    const auto p = t.write("prefix.log", prefix);
    const auto c = cli({"train", "--grammar", g, "--input", in, "--gold", gb, "--proportions", "4,2,2", "--seed", "3",
                        "--split-seed", "1", "--max-iterations", "60", "--resume", p, "--log", t.file("c.log"),
                        "--out-weights", t.file("c.w")});
    REQUIRE(c.status == 0);
    CHECK(slurp(t.file("c.log")) == slurp(t.file("a.log")));

    CHECK(cli({"train", "--grammar", g, "--input", in, "--gold", t.write("short.tb", "(S a)\n")}).status != 0);
}

TEST_CASE("frequency filter with fallback through the command line") {
    TempDir t;
    const auto g = t.write("toy.grammar", toy::clauses);
    const auto freq = t.write("toy.freq", "Transitive\t0.5\nIntransitive\t0.1\n");
    const auto in = t.write("c.tagged", "dog/N runs/V\n");
    const auto r = cli({"parse", "--grammar", g, "--freq", freq, "--filter-k", "1", "--input", in, "--report",
                        t.file("r.jsonl")});
    REQUIRE(r.status == 0);
    const auto rec = records(t.file("r.jsonl"))[1];
    CHECK(rec["parsed"] == true);
    // Transitive is removed structurally, so the top-1 filter keeps Intransitive
    CHECK(rec["fallback_triggered"] == false);
    CHECK(rec["filter"][1]["removed_by_structure"] == 1);
}

} // TEST_SUITE
