#include "gpp/report.hpp"

#include <fstream>
#include <sstream>

#include "gpp/fond_planner.hpp"
#include "gpp/strips.hpp"

namespace gpp {

Report::Section &Report::add(const std::string &name) {
    sections.push_back({name, {}});
    return sections.back();
}

void Report::line(const std::string &text) {
    if (sections.empty())
        add("run");
    sections.back().lines.push_back(text);
}

std::string Report::str() const {
    std::ostringstream out;
    for (const Section &section : sections) {
        out << "[" << section.name << "]\n";
        for (const std::string &line : section.lines)
            out << line << "\n";
    }
    return out.str();
}

std::string hash_hex(const std::string &data) {
    uint64_t h = fnv1a(data);
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write file '" + path + "'");
    out << content;
}

}  // namespace gpp
