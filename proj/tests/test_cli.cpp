// End-to-end checks of the command-line surface: exit codes, file
// formats, and pipe composition (fuse output feeds rover and score).

#include <doctest.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mixfuse/corpus_io.hpp"

using namespace mixfuse;

namespace {

std::string tmp_name(const std::string& stem) {
  static int counter = 0;
  return "cli_" + std::to_string(::getpid()) + "_" + stem + "_" +
         std::to_string(counter++) + ".tmp";
}

void write(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

int run(const std::string& args) {
  std::string cmd = std::string(MIXFUSE_CLI_PATH) + " " + args +
                    " >cli_stdout.tmp 2>cli_stderr.tmp";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Cleanup {
  std::vector<std::string> files;
  ~Cleanup() {
    for (const auto& f : files) std::remove(f.c_str());
    std::remove("cli_stdout.tmp");
    std::remove("cli_stderr.tmp");
  }
  std::string add(const std::string& f) {
    files.push_back(f);
    return f;
  }
};

}  // namespace

TEST_CASE("validate exit codes") {
  Cleanup c;
  const std::string clean = c.add(tmp_name("clean"));
  write(clean, "u1\tka3 ni1-xi3xi(3)=2\nu2\ttucena ba4\n");
  CHECK(run("validate --table " + clean) == 0);

  const std::string dirty = c.add(tmp_name("dirty"));
  write(dirty, "u1\tka3 3ba4\n");
  CHECK(run("validate --table " + dirty) == 1);
  CHECK(slurp("cli_stdout.tmp").find("StrayTone") != std::string::npos);

  CHECK(run("validate --table " + dirty + " --mode lenient") == 1);

  const std::string empty = c.add(tmp_name("empty"));
  write(empty, "\n");
  CHECK(run("validate --table " + empty) == 2);

  CHECK(run("validate --table no_such_file.tsv") == 3);
  CHECK(run("validate") == 2);  // missing required option
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("fuse writes a table and a trace") {
  Cleanup c;
  const std::string novice = c.add(tmp_name("novice"));
  const std::string asr = c.add(tmp_name("asr"));
  const std::string fused = c.add(tmp_name("fused"));
  const std::string trace = c.add(tmp_name("trace"));
  write(novice, "u1\tka3ni3=a2 tucena\nu2\tbe3e3=an4\n");
  write(asr, "u1\tka3ni(3)=a2 tu3se4na2\nu2\tbe'3e3=an4\n");

  CHECK(run("fuse --novice " + novice + " --asr " + asr + " --mode fusion2" +
            " --output " + fused + " --trace " + trace) == 0);

  auto out = load_table(fused);
  CHECK(out.entries["u1"] == "ka3ni(3)=a2 tucena");
  CHECK(out.entries["u2"] == "be'3e3=an4");

  std::string t = slurp(trace);
  CHECK(t.find("C1") != std::string::npos);
  CHECK(t.find("W1") != std::string::npos);
  CHECK(t.find('\t') != std::string::npos);
}

TEST_CASE("fuse respects a rule-set file") {
  Cleanup c;
  const std::string novice = c.add(tmp_name("novice"));
  const std::string asr = c.add(tmp_name("asr"));
  const std::string rules = c.add(tmp_name("rules"));
  const std::string fused = c.add(tmp_name("fused"));
  write(novice, "u1\tka3\n");
  write(asr, "u1\tka4\n");
  write(rules, "# keep only word rules\nS2 = off\n");

  CHECK(run("fuse --novice " + novice + " --asr " + asr + " --output " +
            fused + " --rules " + rules) == 0);
  CHECK(load_table(fused).entries["u1"] == "ka3");
}

TEST_CASE("rover combines and score reports") {
  Cleanup c;
  const std::string a = c.add(tmp_name("a"));
  const std::string b = c.add(tmp_name("b"));
  const std::string d = c.add(tmp_name("d"));
  const std::string out = c.add(tmp_name("combined"));
  write(a, "u1\tka3 ni3\n");
  write(b, "u1\tka3 ni4\n");
  write(d, "u1\tka3 ni3\n");

  CHECK(run("rover --hyp novice=" + a + " --hyp t=" + b + " --hyp c=" + d +
            " --output " + out) == 0);
  CHECK(load_table(out).entries["u1"] == "ka3 ni3");

  // Pipe composition: rover output is valid score input.
  const std::string report = c.add(tmp_name("report"));
  const std::string per_utt = c.add(tmp_name("perutt"));
  CHECK(run("score --ref " + a + " --hyp " + out + " --json " + report +
            " --per-utt " + per_utt) == 0);
  std::string json = slurp(report);
  CHECK(json.find("\"wer\"") != std::string::npos);
  CHECK(json.find("\"cer\"") != std::string::npos);
  CHECK(json.find("\"categories\"") != std::string::npos);
  CHECK(slurp(per_utt).find("uttid") != std::string::npos);
}

TEST_CASE("classify-errors prints the category table") {
  Cleanup c;
  const std::string ref = c.add(tmp_name("ref"));
  const std::string hyp = c.add(tmp_name("hyp"));
  write(ref, "u1\tka3ni(3)=a2\n");
  write(hyp, "u1\tka3ni3=a2\n");
  CHECK(run("classify-errors --ref " + ref + " --hyp " + hyp) == 0);
  std::string out = slurp("cli_stdout.tmp");
  CHECK(out.find("Parenthesis") != std::string::npos);
}

TEST_CASE("inject produces a corrupted table") {
  Cleanup c;
  const std::string ref = c.add(tmp_name("ref"));
  const std::string out = c.add(tmp_name("noisy"));
  write(ref, "u1\tka3 ni3 ba4\nu2\tbe'3e3=an4 mi'4i4\n");
  CHECK(run("inject --ref " + ref + " --category Tone --count 1 --seed 7" +
            " --output " + out) == 0);
  auto noisy = load_table(out);
  CHECK(noisy.size() == 2);
  CHECK(noisy.entries != load_table(ref).entries);

  CHECK(run("inject --ref " + ref + " --category Nope --output " + out) == 2);
}

TEST_CASE("fuse --jobs gives identical output") {
  Cleanup c;
  const std::string novice = c.add(tmp_name("novice"));
  const std::string asr = c.add(tmp_name("asr"));
  const std::string f1 = c.add(tmp_name("f1"));
  const std::string f4 = c.add(tmp_name("f4"));
  std::string nov_content;
  std::string asr_content;
  for (int i = 0; i < 24; ++i) {
    nov_content += "u" + std::to_string(i) + "\tka3ni3=a2 be3e3=an4 tucena\n";
    asr_content +=
        "u" + std::to_string(i) + "\tka3ni(3)=a2 be'3e3=an4 tu3se4na2\n";
  }
  write(novice, nov_content);
  write(asr, asr_content);
  CHECK(run("fuse --novice " + novice + " --asr " + asr + " --output " + f1 +
            " --jobs 1") == 0);
  CHECK(run("fuse --novice " + novice + " --asr " + asr + " --output " + f4 +
            " --jobs 4") == 0);
  CHECK(slurp(f1) == slurp(f4));
  CHECK(load_table(f1).entries.begin()->second == "ka3ni(3)=a2 be'3e3=an4 tucena");
}

TEST_CASE("four-system pipeline: fuse feeds rover, rover feeds score") {
  Cleanup c;
  const std::string expert = c.add(tmp_name("expert"));
  const std::string novice = c.add(tmp_name("novice"));
  const std::string asr1 = c.add(tmp_name("asr1"));
  const std::string asr2 = c.add(tmp_name("asr2"));
  const std::string fused = c.add(tmp_name("fused"));
  const std::string combined = c.add(tmp_name("combined"));

  write(expert, "u1\tka3ni(3)=a2 be'3e3=an4\nu2\tmi'4i4 tucena\n");
  write(novice, "u1\tka3ni3=a2 be'3e3=an4\nu2\tmi4 tucena\n");
  write(asr1, "u1\tka3ni(3)=a2 be'3e3=an4\nu2\tmi'4i4 tu3se4na2\n");
  write(asr2, "u1\tka3ni(3)=a2 be'3e4=an4\nu2\tmi'4i4 tucena\n");

  CHECK(run("fuse --novice " + novice + " --asr " + asr1 +
            " --output " + fused) == 0);
  CHECK(run("rover --hyp novice=" + novice + " --hyp b=" + asr1 + " --hyp c=" +
            asr2 + " --hyp fusion2=" + fused + " --output " + combined +
            " --priority novice,b,c,fusion2") == 0);
  CHECK(run("score --ref " + expert + " --hyp " + combined) == 0);

  // The combination fixes what the novice got wrong and keeps what it
  // got right.
  auto out = load_table(combined);
  CHECK(out.entries["u1"] == "ka3ni(3)=a2 be'3e3=an4");
  CHECK(out.entries["u2"] == "mi'4i4 tucena");
}

TEST_CASE("ELAN-export input format") {
  Cleanup c;
  const std::string elan = c.add(tmp_name("elan"));
  const std::string out = c.add(tmp_name("out"));
  write(elan, "u1\t0.00\t1.25\tka3 ni3\nu2\t1.25\t2.50\tba4\n");
  CHECK(run("--format elan --id-col 1 --text-col 4 validate --table " +
            elan) == 0);
  // Score an ELAN export against itself through the format flags.
  CHECK(run("--format elan score --ref " + elan + " --hyp " + elan +
            " --json " + out) == 0);
  CHECK(slurp(out).find("\"rate\": 0.0") != std::string::npos);
}

TEST_CASE("grammar file is honored") {
  Cleanup c;
  const std::string grammar = c.add(tmp_name("grammar"));
  const std::string table = c.add(tmp_name("table"));
  // A tiny grammar without 'k': "ka3" now has an illegal character.
  write(grammar,
        "vowels = a e i o u\nconsonants = b n\ntone_digits = 1 2 3 4\n");
  write(table, "u1\tka3\n");
  CHECK(run("--grammar " + grammar + " validate --table " + table) == 1);
  CHECK(slurp("cli_stdout.tmp").find("IllegalCharacter") != std::string::npos);
}
