#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <string>

namespace ldrlle {

/// Base class of every error raised by the library.
///
/// Per-neighborhood failures are annotated with the index of the point whose
/// neighborhood failed once they propagate through the weight assembly.
class Error : public std::exception
{
public:
  explicit Error(std::string what) : mWhat(std::move(what)) {}

  const char* what() const noexcept override { return mWhat.c_str(); }

  std::optional<std::size_t> point() const { return mPoint; }

  void annotatePoint(std::size_t i)
  {
    if (mPoint) return;
    mPoint = i;
    mWhat = "point " + std::to_string(i) + ": " + mWhat;
  }

private:
  std::string mWhat;
  std::optional<std::size_t> mPoint;
};

class InvalidArgument : public Error
{
public:
  using Error::Error;
};

/// Malformed input file. Line and column are 1-based; column 0 means unknown.
class FormatError : public Error
{
public:
  FormatError(std::string what, std::size_t line, std::size_t column = 0)
      : Error(std::move(what)), mLine(line), mColumn(column)
  {}
  std::size_t line() const { return mLine; }
  std::size_t column() const { return mColumn; }

private:
  std::size_t mLine;
  std::size_t mColumn;
};

/// Gram matrix of an unregularized neighborhood is singular to working precision.
class SingularNeighborhood : public Error
{
public:
  using Error::Error;
};

/// Weights cannot be normalized because they sum to zero.
class DegenerateWeights : public Error
{
public:
  using Error::Error;
};

/// The projected neighborhood is not in general position.
class GeneralPositionViolation : public Error
{
public:
  GeneralPositionViolation(std::string what, double alpha)
      : Error(std::move(what)), mAlpha(alpha)
  {}
  double alpha() const { return mAlpha; }

private:
  double mAlpha;
};

/// The zero eigenvalue of M is not simple: the neighbor graph has several components.
class DisconnectedGraph : public Error
{
public:
  DisconnectedGraph(std::string what, std::size_t components)
      : Error(std::move(what)), mComponents(components)
  {}
  std::size_t components() const { return mComponents; }

private:
  std::size_t mComponents;
};

class NumericalError : public Error
{
public:
  using Error::Error;
};

} // namespace ldrlle
