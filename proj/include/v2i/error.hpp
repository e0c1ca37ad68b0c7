/*
 * Copyright (C) 2026 The v2i-testbed Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace v2i {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define V2I_DEFINE_ERROR(Name)                                                 \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {}       \
  }

V2I_DEFINE_ERROR(OutOfRange);
V2I_DEFINE_ERROR(ParseError);
V2I_DEFINE_ERROR(InvariantViolation);
V2I_DEFINE_ERROR(NoMatch);
V2I_DEFINE_ERROR(UnknownLane);
V2I_DEFINE_ERROR(UnknownGroup);
V2I_DEFINE_ERROR(InvalidInput);
V2I_DEFINE_ERROR(OutOfExtent);
V2I_DEFINE_ERROR(ConfigError);
V2I_DEFINE_ERROR(TransportError);
V2I_DEFINE_ERROR(IoError);

#undef V2I_DEFINE_ERROR

} // namespace v2i
