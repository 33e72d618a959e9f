#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "minhash/types.hpp"

namespace minhash {

// Input corpora:
//   lines        one set per line: whitespace-separated non-negative element
//                IDs, optional leading "id:" token
//   sparse-index one set per line: "label idx1:val1 idx2:val2 ..."; any
//                nonzero val marks membership of idx (LibSVM-style binary
//                corpora)
enum class CorpusFormat { lines, sparse_index };

CorpusFormat parse_corpus_format(const std::string& name);

struct InputCorpus {
    CorpusFormat format = CorpusFormat::lines;
    std::string path;
    std::vector<SetRecord> sets;
};

// Parse errors report "path:line: message"; empty sets and duplicate or
// unsorted element IDs are rejected.
InputCorpus load_corpus(const std::string& path, CorpusFormat format,
                        const UniverseConfig& universe = UniverseConfig::full());
InputCorpus parse_corpus(std::istream& in, const std::string& path, CorpusFormat format,
                         const UniverseConfig& universe = UniverseConfig::full());

}  // namespace minhash
