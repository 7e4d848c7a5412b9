// tasr/common.hpp

// Copyright 2026  The tasr authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TASR_COMMON_HPP
#define TASR_COMMON_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tasr {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVectorX = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using MatrixXf = MatrixX<float>;
using VectorXf = VectorX<float>;
using RowVectorXf = RowVectorX<float>;

// Reserved vocabulary slots, fixed for every unit kind.
constexpr int kPadId = 0;
constexpr int kUnkId = 1;
constexpr int kBosId = 2;
constexpr int kEosId = 3;
constexpr int kNumExtraTokens = 4;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

namespace internal {
inline void fail(const char* cond, const std::string& msg) {
  std::ostringstream os;
  os << "check failed (" << cond << ")";
  if (!msg.empty()) os << ": " << msg;
  throw Error(os.str());
}
}  // namespace internal

#define TASR_REQUIRE(cond, msg)                          \
  do {                                                   \
    if (!(cond)) ::tasr::internal::fail(#cond, (msg));   \
  } while (0)

}  // namespace tasr

#endif  // TASR_COMMON_HPP
