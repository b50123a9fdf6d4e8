#pragma once

// Linear auxiliary problem for the first-order correction sigma1: find the
// equilibrated field minimizing the complementary energy of the linearized
// (compliance C) material, loaded by the displacement jump c/r that the
// A-discontinuity imposes at every interface.

#include "weldcreep/baseline.hpp"
#include "weldcreep/linsolve.hpp"
#include "weldcreep/stressfn.hpp"

#include <Eigen/Core>

#include <memory>
#include <optional>
#include <vector>

namespace weldcreep {

enum class FieldKind {
  correction_single,    // sigma1 for one interface with unit weight
  correction_combined,  // sum_j alpha_j sigma1^(j)
  nonlinear,            // full sigma(s) = sigma0 + sum c_i sigma_i
};

struct FieldSolution {
  std::shared_ptr<const Basis> basis;
  Eigen::VectorXd coefficients;
  FieldKind kind = FieldKind::correction_combined;
  std::optional<double> interface;  // for correction_single
  double s = 0.0;                   // for nonlinear
  // Set for nonlinear fields: sigma0 of this config is added on evaluation.
  std::optional<PipeConfig> baseline;
  SolveReport report;

  StressState evaluate(double r, double z, Side side = Side::above) const;
};

// K_ij = int sigma_i . C(r) sigma_j r dr dz. Built from separable
// products of the tabulated radial and axial factors. `asymmetry` receives
// ||K - K^T||_F / ||K||_F before the final symmetrization.
Eigen::MatrixXd assemble_gram(const Basis& basis, const PipeConfig& config, const QuadratureGrid& grid,
                              double* asymmetry = nullptr);
Eigen::MatrixXd assemble_gram(const BasisTables& tables, const PipeConfig& config, const QuadratureGrid& grid,
                              double* asymmetry = nullptr);

// f_i = -weight * int c sigma_rz,i(r, z_star) dr over the wall, using the
// radial rule of `grid`. Throws when z_star is not an interface of the layup.
Eigen::VectorXd assemble_rhs(const Basis& basis, const PipeConfig& config, const QuadratureGrid& grid, double z_star,
                             double weight = 1.0);

struct LinearCorrectionProblem {
  std::shared_ptr<const Basis> basis;
  QuadratureGrid grid;
  Eigen::MatrixXd K;
  double asymmetry = 0.0;
  // One unit-weight right-hand side per interface where A jumps.
  std::vector<double> interfaces;
  std::vector<Eigen::VectorXd> rhs;
  std::vector<double> alphas;
};

// Grid resolution follows the basis sizes; order is the Gauss order per cell.
LinearCorrectionProblem assemble_problem(const PipeConfig& config, std::shared_ptr<const Basis> basis,
                                         int quad_order = 12);

// One factorization of K shared by all interface solves.
std::vector<FieldSolution> solve_per_interface(const LinearCorrectionProblem& problem, SolverOptions opts = {});

FieldSolution combine_interfaces(const std::vector<FieldSolution>& parts, const std::vector<double>& alphas);

// Sum_j alpha_j sigma1^(j).
FieldSolution solve_correction(const LinearCorrectionProblem& problem, SolverOptions opts = {});

// sigma0(r) + s * sigma1(r, z)
StressState first_order_field(const PipeConfig& config, const FieldSolution& sigma1, double s, double r, double z,
                              Side side = Side::above);

}  // namespace weldcreep
