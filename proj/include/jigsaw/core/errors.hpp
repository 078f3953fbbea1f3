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

#include <stdexcept>
#include <string>

namespace jigsaw {

/// Base class for every error raised by the library. The C API maps each
/// subclass onto a distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a precondition (a == b for directions, G mismatch, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Data handed to an operation is unusable (image too small, bad rect, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Configuration rejected before any work was done.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Filesystem or codec failure.
class IoError : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

/// An id that must be unique is already taken.
class Conflict : public Error {
 public:
  using Error::Error;
};

}  // namespace jigsaw
