// Copyright 2026 The pseudoforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PSEUDOFORGE_VERSION_HPP_
#define PSEUDOFORGE_VERSION_HPP_

namespace pseudoforge {

inline constexpr const char* kToolVersion = "1.0.0";

// On-disk format identifiers. Readers reject files whose header does not
// match; bump the suffix when a format changes incompatibly.
inline constexpr const char* kBpeFormatVersion = "pseudo-forge-bpe-1";
inline constexpr const char* kManifestFormatVersion = "pseudo-forge-manifest-1";
inline constexpr const char* kToyScorerFormatVersion = "pseudo-forge-toyscorer-1";

}  // namespace pseudoforge

#endif  // PSEUDOFORGE_VERSION_HPP_
