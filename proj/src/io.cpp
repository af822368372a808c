#include "dunkl/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dunkl {

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const PathRecord& path)
{
    out << "t";
    for (std::size_t i = 0; i < path.dim; ++i)
        out << ",x_" << (i + 1);
    out << ",min_margin\n";
    for (std::size_t r = 0; r < path.size(); ++r) {
        out << format_double(path.times[r]);
        for (double v : path.state(r))
            out << ',' << format_double(v);
        out << ',' << format_double(path.row_margins[r]) << '\n';
    }
}

void write_csv_file(const std::string& path, const PathRecord& record)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    write_csv(out, record);
    if (!out)
        throw std::runtime_error("failed writing " + path);
}

void write_root_system(std::ostream& out, const RootSystem& rs)
{
    out << "dimension " << rs.dim() << "\nsimple";
    for (auto s : rs.simple_indices())
        out << ' ' << s;
    out << "\norbits";
    for (auto o : rs.orbit_labels())
        out << ' ' << o;
    out << '\n';
    for (const auto& r : rs.roots()) {
        for (std::size_t i = 0; i < r.size(); ++i)
            out << (i ? " " : "") << format_double(r[i]);
        out << '\n';
    }
}

namespace {

std::istringstream header_line(std::istream& in, const std::string& key)
{
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("root system: missing '" + key + "' line");
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word != key)
        throw std::runtime_error("root system: expected '" + key + "', got '" + word + "'");
    return ls;
}

}  // namespace

RootSystem read_root_system(std::istream& in)
{
    std::size_t dim = 0;
    if (!(header_line(in, "dimension") >> dim) || dim == 0)
        throw std::runtime_error("root system: bad dimension");
    std::vector<std::size_t> simple, orbits;
    {
        auto ls = header_line(in, "simple");
        for (std::size_t v; ls >> v;)
            simple.push_back(v);
    }
    {
        auto ls = header_line(in, "orbits");
        for (std::size_t v; ls >> v;)
            orbits.push_back(v);
    }
    std::vector<Vec> roots;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::istringstream ls(line);
        Vec r;
        for (double v; ls >> v;)
            r.push_back(v);
        if (!ls.eof() || r.size() != dim)
            throw std::runtime_error("root system: bad root line '" + line + "'");
        roots.push_back(std::move(r));
    }
    std::vector<Vec> simple_roots;
    for (auto s : simple) {
        if (s >= roots.size())
            throw std::runtime_error("root system: simple index out of range");
        simple_roots.push_back(roots[s]);
    }
    RootSystem rs = RootSystem::assemble(roots, simple_roots);
    if (rs.orbit_labels() != orbits || rs.simple_indices() != simple)
        throw std::runtime_error("root system: header does not match the roots");
    return rs;
}

}  // namespace dunkl
