#pragma once

#include <Eigen/Core>
#include <string>
#include <unordered_map>
#include <vector>

#include "prexsyn/util/errors.hpp"
#include "prexsyn/util/rng.hpp"

namespace prexsyn::model {

template <typename Scalar>
using MatrixX =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using MatMap = Eigen::Map<MatrixX<Scalar>>;

template <typename Scalar>
using ConstMatMap = Eigen::Map<const MatrixX<Scalar>>;

// Flat parameter arena with named 2-D views; gradients live in a parallel
// buffer so the optimizer and checkpointing can treat everything uniformly.
template <typename Scalar>
class ParamStore {
 public:
  struct Entry {
    std::string name;
    int rows = 0;
    int cols = 0;
    std::size_t offset = 0;
  };

  int add(const std::string& name, int rows, int cols) {
    if (index_.count(name)) throw InvariantError("duplicate tensor " + name);
    Entry e{name, rows, cols, data_.size()};
    index_[name] = static_cast<int>(entries_.size());
    entries_.push_back(e);
    data_.resize(data_.size() + std::size_t(rows) * cols, Scalar(0));
    return static_cast<int>(entries_.size()) - 1;
  }

  void finalize() { grad_.assign(data_.size(), Scalar(0)); }

  MatMap<Scalar> param(const std::string& name) {
    const Entry& e = entry(name);
    return MatMap<Scalar>(data_.data() + e.offset, e.rows, e.cols);
  }
  ConstMatMap<Scalar> param(const std::string& name) const {
    const Entry& e = entry(name);
    return ConstMatMap<Scalar>(data_.data() + e.offset, e.rows, e.cols);
  }
  MatMap<Scalar> grad(const std::string& name) {
    const Entry& e = entry(name);
    return MatMap<Scalar>(grad_.data() + e.offset, e.rows, e.cols);
  }

  void zero_grad() { std::fill(grad_.begin(), grad_.end(), Scalar(0)); }

  std::vector<Scalar>& data() { return data_; }
  const std::vector<Scalar>& data() const { return data_; }
  std::vector<Scalar>& grad_data() { return grad_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return data_.size(); }

  const Entry& entry(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw InvariantError("unknown tensor " + name);
    return entries_[it->second];
  }

  // N(0, scale) init for weight matrices; biases/offsets stay zero and
  // LayerNorm gains are set to one by the model after initialization.
  void init_normal(Rng& rng, Scalar scale) {
    for (auto& v : data_) v = static_cast<Scalar>(normal(rng)) * scale;
  }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, int> index_;
  std::vector<Scalar> data_;
  std::vector<Scalar> grad_;
};

}  // namespace prexsyn::model
