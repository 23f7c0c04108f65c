/*
 * Copyright 2026 The ksg Authors
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

#ifndef KSG_ERRORS_HPP
#define KSG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ksg {

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// The document is not well-formed JSON or does not follow the expected shape.
class SchemaError : public Error
{
public:
    explicit SchemaError(const std::string &what) : Error("schema error: " + what) { }
};

/// The document is well-formed but describes an invalid game or strategy.
class ValidationError : public Error
{
public:
    explicit ValidationError(const std::string &what) : Error("validation error: " + what) { }
};

/// A knowledge update produced the empty set.
class InconsistentObservation : public Error
{
public:
    explicit InconsistentObservation(const std::string &what)
        : Error("inconsistent observation: " + what) { }
};

/// A configured cap (knowledge states, beliefs, candidates) was exceeded.
class ResourceLimit : public Error
{
public:
    explicit ResourceLimit(const std::string &what) : Error("resource limit: " + what) { }
};

class NotClosed : public Error
{
public:
    explicit NotClosed(const std::string &what) : Error("not closed: " + what) { }
};

}

#endif
