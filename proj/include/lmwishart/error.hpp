#pragma once

#include <stdexcept>
#include <string>

namespace lmw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotDecomposable : public Error {
 public:
  explicit NotDecomposable(const std::string& what = "graph is not decomposable") : Error(what) {}
};

class NotPerfectOrder : public Error {
 public:
  explicit NotPerfectOrder(const std::string& what = "clique sequence violates running intersection") : Error(what) {}
};

class NotHomogeneous : public Error {
 public:
  explicit NotHomogeneous(const std::string& what = "graph is not homogeneous") : Error(what) {}
};

class NotPerfectDag : public Error {
 public:
  explicit NotPerfectDag(const std::string& what = "DAG has an immorality") : Error(what) {}
};

class NotDagVersion : public Error {
 public:
  explicit NotDagVersion(const std::string& what) : Error(what) {}
};

class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(const std::string& what = "matrix is not positive definite") : Error(what) {}
};

class NotPartialPD : public Error {
 public:
  explicit NotPartialPD(const std::string& what) : Error(what) {}
};

class SparsityViolation : public Error {
 public:
  explicit SparsityViolation(const std::string& what) : Error(what) {}
};

class OutOfDomain : public Error {
 public:
  explicit OutOfDomain(const std::string& what) : Error(what) {}
};

class CombinatorialLimit : public Error {
 public:
  explicit CombinatorialLimit(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace lmw
