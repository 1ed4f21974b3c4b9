#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "tracklet/streamline_io.hpp"

namespace tracklet {

Tractogram read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Err::IoError, "read_jsonl: cannot open " + path);

    Tractogram t;
    bool any_label = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            fail(Err::ParseError, "read_jsonl: " + path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (!rec.is_object() || !rec.contains("points") || !rec["points"].is_array())
            fail(Err::ParseError,
                 "read_jsonl: " + path + ":" + std::to_string(lineno) + ": missing points array");

        Streamline s;
        for (const auto& p : rec["points"]) {
            if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() || !p[2].is_number())
                fail(Err::ParseError,
                     "read_jsonl: " + path + ":" + std::to_string(lineno) + ": point is not [x,y,z]");
            s.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
        }
        try {
            validate_streamline(s, "record");
        } catch (const Error& e) {
            fail(Err::ParseError,
                 "read_jsonl: " + path + ":" + std::to_string(lineno) + ": " + e.what());
        }

        int label = -1;
        if (rec.contains("label")) {
            if (!rec["label"].is_number_integer())
                fail(Err::ParseError,
                     "read_jsonl: " + path + ":" + std::to_string(lineno) + ": label is not an integer");
            label = rec["label"].get<int>();
            if (label < 0)
                fail(Err::ParseError,
                     "read_jsonl: " + path + ":" + std::to_string(lineno) + ": negative label");
            any_label = true;
        }
        t.streamlines.push_back(std::move(s));
        t.labels.push_back(label);
    }

    if (!any_label) {
        t.labels.clear();
    } else {
        for (std::size_t i = 0; i < t.labels.size(); ++i)
            if (t.labels[i] < 0)
                fail(Err::ParseError, "read_jsonl: " + path + ": record " + std::to_string(i + 1) +
                                          " is missing a label while others are labeled");
    }

    t.recompute_bounds();
    return t;
}

void write_jsonl(const Tractogram& t, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) fail(Err::IoError, "write_jsonl: cannot open " + path);

    char num[32];
    auto emit = [&](double v) {
        std::snprintf(num, sizeof(num), "%.17g", v);
        std::fputs(num, f);
    };

    for (std::size_t i = 0; i < t.streamlines.size(); ++i) {
        std::fputs("{\"points\": [", f);
        const auto& s = t.streamlines[i];
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (j) std::fputs(", ", f);
            std::fputc('[', f);
            emit(s[j].x); std::fputs(", ", f);
            emit(s[j].y); std::fputs(", ", f);
            emit(s[j].z);
            std::fputc(']', f);
        }
        std::fputc(']', f);
        if (t.has_labels()) std::fprintf(f, ", \"label\": %d", t.labels[i]);
        std::fputs("}\n", f);
    }
    if (std::fclose(f) != 0) fail(Err::IoError, "write_jsonl: write failed for " + path);
}

}  // namespace tracklet
