#include "polyreach/simnet.hpp"

#include <fstream>
#include <string>

#include "json.hpp"

namespace polyreach {

std::map<int, std::map<std::pair<int, int>, int>> message_counts(
    const std::vector<MessageRecord>& log) {
  std::map<int, std::map<std::pair<int, int>, int>> counts;
  for (const MessageRecord& m : log) ++counts[m.round][{m.from, m.to}];
  return counts;
}

void write_message_log(const std::string& path, const std::vector<MessageRecord>& log) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open " + path + " for writing");
  for (const MessageRecord& m : log) {
    nlohmann::json line{{"round", m.round},
                        {"from", m.from},
                        {"to", m.to},
                        {"payload_size", m.payload_size}};
    out << line.dump() << '\n';
  }
}

}  // namespace polyreach
