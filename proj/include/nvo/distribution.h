// Copyright 2026 The nvo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NVO_DISTRIBUTION_H_
#define NVO_DISTRIBUTION_H_

#include <vector>

namespace nvo {

// Probability masses over the K histogram bins.
struct Distribution {
  std::vector<double> masses;

  int size() const { return static_cast<int>(masses.size()); }
  double Sum() const;
};

}  // namespace nvo

#endif  // NVO_DISTRIBUTION_H_
