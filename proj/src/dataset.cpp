#include "specgraph/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "specgraph/error.hpp"
#include "specgraph/fileio.hpp"

namespace specgraph {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

}  // namespace

void DatasetManifest::refresh_classes() {
    std::set<int> s;
    for (const auto& e : samples) s.insert(e.label);
    classes.assign(s.begin(), s.end());
}

void DatasetManifest::validate() const {
    std::set<std::string> seen;
    for (const auto& e : samples) {
        if (!std::binary_search(classes.begin(), classes.end(), e.label))
            throw DataError("manifest: label " + std::to_string(e.label) + " of '" + e.path +
                            "' is not in the class list");
        if (!seen.insert(e.path).second) throw DataError("manifest: duplicate path '" + e.path + "'");
    }
}

std::vector<int> DatasetManifest::labels() const {
    std::vector<int> out;
    out.reserve(samples.size());
    for (const auto& e : samples) out.push_back(e.label);
    return out;
}

DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir,
                               const std::string& name) {
    std::istringstream in(text);
    std::string line;
    DatasetManifest m;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (!header_seen) {
            header_seen = true;
            if (line != "path,label") throw ParseError(name + ": expected header 'path,label'");
            continue;
        }
        const auto comma = line.rfind(',');
        if (comma == std::string::npos)
            throw ParseError(name + ":" + std::to_string(line_no) + ": expected 'path,label'");
        std::string path = trim(line.substr(0, comma));
        const std::string label_text = trim(line.substr(comma + 1));
        int label = 0;
        try {
            std::size_t used = 0;
            label = std::stoi(label_text, &used);
            if (used != label_text.size()) throw std::invalid_argument(label_text);
        } catch (const std::exception&) {
            throw ParseError(name + ":" + std::to_string(line_no) + ": label '" + label_text + "' is not an integer");
        }
        if (path.empty()) throw ParseError(name + ":" + std::to_string(line_no) + ": empty path");
        std::filesystem::path p(path);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        m.samples.push_back({p.lexically_normal().string(), label});
    }
    if (!header_seen) throw ParseError(name + ": empty manifest");
    m.refresh_classes();
    m.validate();
    return m;
}

DatasetManifest read_manifest(const std::filesystem::path& csv) {
    return parse_manifest(read_file(csv), csv.parent_path(), csv.string());
}

std::string format_manifest(const DatasetManifest& m) {
    std::string out = "path,label\n";
    for (const auto& e : m.samples) out += e.path + "," + std::to_string(e.label) + "\n";
    return out;
}

void SplitSpec::validate() const {
    for (int r : ratios)
        if (r <= 0) throw ConfigError("split ratios must be positive");
    if (ratios[0] + ratios[1] + ratios[2] != 100) throw ConfigError("split ratios must sum to 100");
}

std::array<int, 3> parse_ratios(const std::string& text) {
    std::array<int, 3> r{};
    std::istringstream in(text);
    std::string part;
    std::size_t i = 0;
    while (std::getline(in, part, ':')) {
        if (i >= 3) throw ConfigError("ratios must look like a:b:c, got '" + text + "'");
        try {
            std::size_t used = 0;
            r[i] = std::stoi(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw ConfigError("ratios must look like a:b:c, got '" + text + "'");
        }
        ++i;
    }
    if (i != 3) throw ConfigError("ratios must look like a:b:c, got '" + text + "'");
    return r;
}

SplitIndices split_indices(std::span<const int> labels, const SplitSpec& spec) {
    spec.validate();
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

    Rng rng(spec.seed);
    SplitIndices out;
    for (auto& [label, members] : by_class) {
        if (members.size() < 3)
            throw DataError("split: class " + std::to_string(label) + " has " + std::to_string(members.size()) +
                            " samples, need at least 3");
        shuffle(members, rng);
        const std::size_t n = members.size();
        const std::size_t n_train = n * static_cast<std::size_t>(spec.ratios[0]) / 100;
        const std::size_t n_val = n * static_cast<std::size_t>(spec.ratios[1]) / 100;
        out.train.insert(out.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
        out.val.insert(out.val.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train),
                       members.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
        out.test.insert(out.test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), members.end());
    }
    return out;
}

DatasetSplit split(const DatasetManifest& m, const SplitSpec& spec) {
    const auto labels = m.labels();
    const auto idx = split_indices(labels, spec);
    DatasetSplit out;
    auto take = [&](const std::vector<std::size_t>& which, DatasetManifest& into) {
        for (auto i : which) into.samples.push_back(m.samples[i]);
        into.classes = m.classes;
    };
    take(idx.train, out.train);
    take(idx.val, out.val);
    take(idx.test, out.test);
    return out;
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

std::size_t uniform_index(Rng& rng, std::size_t n) {
    if (n <= 1) return 0;
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v = 0;
    do {
        v = rng();
    } while (v >= limit);
    return static_cast<std::size_t>(v % bound);
}

}  // namespace specgraph
