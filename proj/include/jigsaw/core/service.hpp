/*
 * Copyright 2026 The Jigsaw-RL Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "jigsaw/core/harness.hpp"

namespace jigsaw::service {

inline constexpr const char* kTokenHeader = "X-Jigsaw-Token";

struct Config {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::size_t batch_cap = 4096;
  std::string token;  // empty disables the check
  std::filesystem::path data_root = "jigsaw-datasets";
  bool log_requests = true;
};

struct Reply {
  int status = 200;
  std::string body;  // JSON
};

/// Hex SHA-256 of a file's bytes.
std::string file_digest(const std::filesystem::path& path);

/// Request handlers as plain functions of the request body, plus an HTTP
/// front end. Reads go through an immutable snapshot that reloads replace.
class Service {
 public:
  explicit Service(Config config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  const Config& config() const noexcept { return config_; }

  /// Replaces the startup manifest. Datasets built over HTTP are kept.
  void load_manifest(const std::filesystem::path& path);

  Reply health() const;
  Reply score(std::string_view body) const;
  Reply learning_signal(std::string_view body) const;
  Reply create_dataset(std::string_view body);
  Reply instance(std::string_view id) const;

  /// Binds the listening socket and returns the port. Throws IoError.
  int bind();
  /// Serves until stop(). Requires bind().
  void run();
  void stop();

 private:
  struct State;
  struct Http;
  std::shared_ptr<const State> snapshot() const;

  Config config_;
  mutable std::mutex mutex_;
  std::shared_ptr<const State> state_;
  std::unique_ptr<Http> http_;
};

}  // namespace jigsaw::service
