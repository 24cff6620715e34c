#pragma once

#include <stdexcept>
#include <string>

namespace persist {

  // Malformed textual input (words, graphs, presentations, element files).
  class ParseError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // An operation was called outside its precondition, e.g. separating a word
  // that lies in the subgroup.
  class DomainError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // A search hit its configured bound before reaching a verdict.  This is
  // never a membership or separability verdict.
  class CapExceeded : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // The sequence n_i fails n_i | n_{i+1} somewhere below the requested index.
  class MultiplicativityError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

}  // namespace persist
