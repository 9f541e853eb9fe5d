#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "randlen/harness.hpp"

namespace randlen::harness {

namespace {
// 17 significant digits round-trips every double exactly.
void append_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}
}  // namespace

void export_paths(const RawResults& res, const std::string& dest) {
    if (res.reps.empty() || res.config.n == 0)
        throw std::invalid_argument("export_paths: empty results");
    std::ofstream out(dest, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + dest + " for writing");

    std::string line;
    out << "replicate,t,y_star,y_sum,n_terms\n";
    for (std::size_t r = 0; r < res.reps.size(); ++r) {
        const auto& rep = res.reps[r];
        for (std::size_t t = 0; t < res.config.n; ++t) {
            if (!res.config.is_signed() && !(rep.y_star[t] <= rep.y_sum[t]))
                throw std::runtime_error("export audit failed: Y* > Y at replicate " +
                                         std::to_string(r) + ", t " + std::to_string(t + 1));
            line.clear();
            line += std::to_string(r);
            line += ',';
            line += std::to_string(t + 1);
            line += ',';
            append_double(line, rep.y_star[t]);
            line += ',';
            append_double(line, rep.y_sum[t]);
            line += ',';
            line += std::to_string(rep.n_terms[t]);
            line += '\n';
            out << line;
        }
    }
    if (!out) throw std::runtime_error("write failed for " + dest);
}

ImportedPaths import_paths(const std::string& src) {
    std::ifstream in(src);
    if (!in) throw std::runtime_error("cannot open " + src + " for reading");
    std::string line;
    if (!std::getline(in, line) || line.rfind("replicate,t,y_star,y_sum,n_terms", 0) != 0)
        throw std::runtime_error(src + " does not look like an exported path file");

    ImportedPaths paths;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const char* p = line.c_str();
        char* end = nullptr;
        const auto rep = std::strtoull(p, &end, 10);
        if (*end != ',') throw std::runtime_error("malformed row in " + src);
        p = end + 1;
        std::strtoull(p, &end, 10);  // t, implied by row order
        if (*end != ',') throw std::runtime_error("malformed row in " + src);
        p = end + 1;
        const double y_star = std::strtod(p, &end);
        if (*end != ',') throw std::runtime_error("malformed row in " + src);
        p = end + 1;
        const double y_sum = std::strtod(p, &end);
        if (*end != ',') throw std::runtime_error("malformed row in " + src);
        p = end + 1;
        const auto n_terms = std::strtoul(p, &end, 10);

        if (rep >= paths.y_star.size()) {
            paths.y_star.resize(rep + 1);
            paths.y_sum.resize(rep + 1);
            paths.n_terms.resize(rep + 1);
        }
        paths.y_star[rep].push_back(y_star);
        paths.y_sum[rep].push_back(y_sum);
        paths.n_terms[rep].push_back(static_cast<std::uint32_t>(n_terms));
    }
    if (paths.y_star.empty()) throw std::runtime_error(src + " contains no data rows");
    return paths;
}

}  // namespace randlen::harness
