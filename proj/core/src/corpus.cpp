#include "minhash/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace minhash {

namespace {

[[noreturn]] void fail(const std::string& path, size_t line, const std::string& msg) {
    throw Error(path + ":" + std::to_string(line) + ": " + msg);
}

uint64_t parse_u64(std::string_view token, const std::string& path, size_t line) {
    uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(token.begin(), token.end(), v);
    if (ec != std::errc() || ptr != token.end())
        fail(path, line, "expected a non-negative integer, got '" + std::string(token) + "'");
    return v;
}

std::vector<std::string> split_ws(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream ss(text);
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return tokens;
}

SetRecord finish_set(std::string id, std::vector<uint64_t> elements,
                     const UniverseConfig& universe, const std::string& path,
                     size_t line) {
    if (elements.empty()) fail(path, line, "empty set");
    std::sort(elements.begin(), elements.end());
    if (std::adjacent_find(elements.begin(), elements.end()) != elements.end())
        fail(path, line, "duplicate element ID");
    for (uint64_t e : elements)
        if (!universe.contains(e)) fail(path, line, "element ID outside the universe");
    return SetRecord(std::move(id), std::move(elements), universe);
}

}  // namespace

CorpusFormat parse_corpus_format(const std::string& name) {
    if (name == "lines") return CorpusFormat::lines;
    if (name == "sparse-index") return CorpusFormat::sparse_index;
    throw Error("unknown corpus format '" + name + "' (expected lines or sparse-index)");
}

InputCorpus parse_corpus(std::istream& in, const std::string& path, CorpusFormat format,
                         const UniverseConfig& universe) {
    InputCorpus corpus;
    corpus.format = format;
    corpus.path = path;

    std::string text;
    size_t line_no = 0;
    while (std::getline(in, text)) {
        ++line_no;
        const auto tokens = split_ws(text);
        if (tokens.empty()) continue;  // blank lines are allowed

        std::string id;
        std::vector<uint64_t> elements;

        if (format == CorpusFormat::lines) {
            size_t first = 0;
            if (tokens[0].size() > 1 && tokens[0].back() == ':') {
                id = tokens[0].substr(0, tokens[0].size() - 1);
                first = 1;
            } else {
                id = "set" + std::to_string(line_no);
            }
            for (size_t i = first; i < tokens.size(); ++i)
                elements.push_back(parse_u64(tokens[i], path, line_no));
        } else {
            id = tokens[0];
            for (size_t i = 1; i < tokens.size(); ++i) {
                const std::string& tok = tokens[i];
                const size_t colon = tok.find(':');
                if (colon == std::string::npos)
                    fail(path, line_no, "expected idx:val, got '" + tok + "'");
                const uint64_t idx =
                    parse_u64(std::string_view(tok).substr(0, colon), path, line_no);
                const std::string_view val = std::string_view(tok).substr(colon + 1);
                double v = 0;
                const auto [ptr, ec] = std::from_chars(val.begin(), val.end(), v);
                if (ec != std::errc() || ptr != val.end())
                    fail(path, line_no, "bad value in '" + tok + "'");
                if (v != 0) elements.push_back(idx);
            }
        }
        corpus.sets.push_back(
            finish_set(std::move(id), std::move(elements), universe, path, line_no));
    }
    return corpus;
}

InputCorpus load_corpus(const std::string& path, CorpusFormat format,
                        const UniverseConfig& universe) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return parse_corpus(in, path, format, universe);
}

}  // namespace minhash
