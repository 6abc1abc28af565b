#ifndef GPP_REPORT_HPP
#define GPP_REPORT_HPP

#include <string>
#include <vector>

/*
  Line-oriented run reports: section headers in brackets, stable field
  order, no wall-clock values unless explicitly requested, so reports are
  byte-identical across runs on equal inputs.
*/

namespace gpp {

struct Report {
    struct Section {
        std::string name;
        std::vector<std::string> lines;
    };
    std::vector<Section> sections;

    Section &add(const std::string &name);
    void line(const std::string &text);  // appends to the last section
    std::string str() const;
};

std::string hash_hex(const std::string &data);
std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &content);

}  // namespace gpp

#endif
