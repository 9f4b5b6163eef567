// Copyright 2026 The ISEC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace isec {

struct ServiceOptions {
  /// Datasets are persisted under `workdir/datasets/<id>/` and reloaded on
  /// start.
  std::filesystem::path workdir = "isec-data";
  std::size_t max_upload_bytes = 50ull * 1024 * 1024;
  std::string cors_origin = "*";
  /// Simulations above this many trials (or with "async": true) run as
  /// background jobs.
  std::size_t sync_trial_limit = 20000;
  /// Worker threads for ranking and simulation; 0 picks the hardware count.
  std::size_t workers = 0;
  /// Keyboard adjacency used when a simulation request carries none.
  std::optional<std::filesystem::path> keyboard;
};

/// HTTP facade over dataset ingestion, ranking, pair inspection and the
/// perturbation simulator.
///
///   POST /datasets                     multipart CSV upload
///   GET  /datasets                     list
///   GET  /datasets/{id}                metadata
///   POST /datasets/{id}/rank           JSON cost config + alpha, k, K, page
///   GET  /datasets/{id}/pairs/{i}/{j}  decomposition of a scored pair
///   POST /datasets/{id}/simulate       typo model + trials + delta
///   GET  /jobs/{id}                    background simulation status
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds to `port`, or to a free port when `port` is 0. Returns the bound
  /// port, or -1 on failure.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called. Requires a successful bind().
  bool run();
  void stop();
  void wait_until_ready() const;

  std::size_t dataset_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace isec
