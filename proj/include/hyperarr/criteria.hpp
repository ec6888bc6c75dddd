#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace hyperarr::criteria {

struct Options {
  unsigned threads = 1;
  std::uint64_t seed = 0;
};

struct Info {
  int id = 0;
  std::string section;  // g24, g31, g33, restrictions, monomial, properties
  std::string title;
  double limit_seconds = 0;
};
const std::vector<Info>& all();
std::vector<std::string> sections();
// Criterion ids of the given sections, in order; throws InvalidArgument on an unknown name.
std::vector<int> for_sections(const std::vector<std::string>& names);

struct Result {
  int id = 0;
  std::string title;
  bool pass = false;
  bool blocked = false;  // stopped by the data gate
  double seconds = 0;
  double limit_seconds = 0;
  std::vector<std::string> lines;  // what was checked, with values
  std::string failure;             // first falsified fact
  nlohmann::json data = nlohmann::json::object();
};
nlohmann::json to_json(const Result& r);
// "PASS [3] title (1.2 s)" or "FAIL [3] title (1.2 s): failure".
std::string summary_line(const Result& r);

// Runs criteria one at a time. State shared between criteria (the A(G31)
// lattice, its partition and the candidate set) is built on first use and
// charged to the criterion that needs it first.
class Runner {
 public:
  explicit Runner(Options opts = {});
  ~Runner();
  Runner(const Runner&) = delete;
  Runner& operator=(const Runner&) = delete;

  Result run(int id);

  struct State;

 private:
  Options opts_;
  std::unique_ptr<State> st_;
};

}  // namespace hyperarr::criteria
