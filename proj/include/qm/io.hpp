#ifndef QM_IO_HPP
#define QM_IO_HPP

#include "qm/framing.hpp"
#include "qm/quiver.hpp"
#include "qm/words.hpp"

#include <string>

namespace qm {

// Canonical quiver JSON: {"arrows":[[i,j,m],...]} with i < j, m != 0,
// entries sorted lexicographically; counts beyond 64 bits are emitted as
// decimal strings. Re-reading an emitted document re-serializes identically.
std::string quiver_to_json(const Quiver& q);
Quiver quiver_from_json(const std::string& text);

// Framed-quiver JSON extends the quiver form with {"mutable":[...]}; frozen
// companions are the negative ids.
std::string framed_to_json(const FramedQuiver& fq);
FramedQuiver framed_from_json(const std::string& text);

std::string word_to_json(const Word& w);
Word word_from_json(const std::string& text);

// Comma-separated positive integers, e.g. "1,2,1".
Word parse_word_arg(const std::string& text);
VertexSet parse_set_arg(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace qm

#endif // QM_IO_HPP
