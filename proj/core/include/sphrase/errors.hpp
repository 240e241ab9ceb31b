#pragma once

#include <stdexcept>
#include <string>

namespace sphrase {

/// A bracket-annotated line with unbalanced or nested brackets.
class MalformedAnnotation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No token survived the vocabulary frequency threshold.
class EmptyVocabulary : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vocabulary file that cannot be parsed back into id space.
class MalformedVocabularyFile : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite value encountered in the training math.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Training was asked to run over a corpus that yields no pairs.
class EmptyCorpus : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cosine similarity against an all-zero vector.
class ZeroVector : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fewer than two phrases: no "other phrase" to sample from.
class InsufficientPhrases : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedAnalogyFile : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedEmbeddingFile : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration that violates a documented invariant (e.g. epochs < 1).
class InvalidConfig : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure, carries the offending path in the message.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sphrase
