#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <stdexcept>
#include <string>

namespace pat {

/// Nodal scalar function on a mesh, one value per vertex.
using Field = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: configuration keys, parameter ranges, mismatched sizes.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// CFL violations, non-finite values, failed factorizations.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Unreadable/unwritable files and malformed file contents.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace pat
