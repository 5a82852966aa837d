#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scirank {

// Base of every exception thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : Error {
  using Error::Error;
};

// Caller passed a parameter outside its documented domain (k < 1, bad chain step, ...).
struct ArgumentError : Error {
  explicit ArgumentError(std::string field, const std::string& what)
      : Error(what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A corpus file line could not be turned into a valid record.
struct ParseError : Error {
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct DuplicateIdError : ParseError {
  DuplicateIdError(std::size_t line, std::string id)
      : ParseError(line, "duplicate doc_id \"" + id + "\""), id_(std::move(id)) {}

  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

// Co-authorship network exceeds the configured node ceiling.
struct GraphTooLarge : Error {
  GraphTooLarge(std::size_t nodes, std::size_t ceiling)
      : Error("graph too large: " + std::to_string(nodes) + " authors exceeds ceiling of " +
              std::to_string(ceiling)),
        nodes_(nodes),
        ceiling_(ceiling) {}

  std::size_t nodes() const noexcept { return nodes_; }
  std::size_t ceiling() const noexcept { return ceiling_; }

 private:
  std::size_t nodes_;
  std::size_t ceiling_;
};

}  // namespace scirank
