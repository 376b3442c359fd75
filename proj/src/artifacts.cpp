#include "urbanmp/artifacts.hpp"

#include <sstream>

#include "urbanmp/analysis.hpp"
#include "urbanmp/error.hpp"
#include "urbanmp/io.hpp"

namespace urbanmp {

std::string events_file_name(double nu) { return "events_nu" + nu_label(nu) + ".csv"; }
std::string observations_file_name(double nu) { return "observations_nu" + nu_label(nu) + ".csv"; }
std::string histogram_file_name(double nu) { return "histogram_nu" + nu_label(nu) + ".csv"; }

SweepArtifacts build_sweep_artifacts(const ScenarioConfig& config)
{
    const auto runs = run_sweep(config);
    SweepArtifacts out;
    std::vector<EnvironmentSummary> summaries;
    nlohmann::json outputs = nlohmann::json::object();
    nlohmann::json seeds = nlohmann::json::object();

    for (const auto& [nu, run] : runs) {
        std::ostringstream events;
        write_events_csv(events, run.observations);
        std::ostringstream observations;
        write_observations_csv(observations, run.observations);

        auto summary = summarize_environment(run, config.canyon.rice_sigma);
        std::ostringstream histogram;
        write_histogram_csv(histogram, histogram_delays(summary.pooled_delays, histogram_bin_width, histogram_max_delay));

        out.files[events_file_name(nu)] = events.str();
        out.files[observations_file_name(nu)] = observations.str();
        out.files[histogram_file_name(nu)] = histogram.str();
        out.seeds[nu] = run.seed;
        outputs[nu_label(nu)] = {{"events", events_file_name(nu)},
                                 {"observations", observations_file_name(nu)},
                                 {"histogram", histogram_file_name(nu)}};
        seeds[nu_label(nu)] = run.seed;
        summaries.push_back(std::move(summary));
    }

    std::vector<std::pair<double, double>> points;
    for (const auto& s : summaries) {
        if (s.median_delay) {
            points.emplace_back(s.mean_received, *s.median_delay);
        }
    }
    std::optional<QuadraticModel> model;
    nlohmann::json model_doc{{"schema_version", schema_version}, {"tool_version", tool_version()}};
    try {
        model = fit_quadratic(points);
        model_doc["available"] = true;
        model_doc.update(model_to_json(*model));
    } catch (const FitError& e) {
        model_doc["available"] = false;
        model_doc["reason"] = e.what();
    }

    out.files[summary_file] = dump_json(sweep_summary_json(summaries, model, config.master_seed));
    out.files[model_file] = dump_json(model_doc);

    const nlohmann::json manifest{{"schema_version", schema_version},
                                  {"tool_version", tool_version()},
                                  {"master_seed", config.master_seed},
                                  {"config", to_json(config)},
                                  {"per_environment_seeds", seeds},
                                  {"output_paths",
                                   {{"summary", summary_file}, {"model", model_file}, {"environments", outputs}}}};
    out.files[manifest_file] = dump_json(manifest);
    return out;
}

} // namespace urbanmp
