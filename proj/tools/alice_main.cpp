// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "alice/diagnostics.hpp"
#include "alice/flow.hpp"

int main(int argc, char **argv)
{
	CLI::App app{"ALICE: automatic module selection for eFPGA redaction"};
	app.require_subcommand(1);

	CLI::App *run = app.add_subcommand("run", "run the full redaction flow on a YAML configuration");
	std::string config_path;
	alice::RunOptions options;
	std::string report_format = "table";
	run->add_option("--config", config_path, "YAML configuration file")->required();
	run->add_option("--characterizer-report", options.characterizer_report,
			"JSON report from an external fabric characterizer");
	run->add_option("--out", options.out_dir, "output directory (default: alice_out)");
	run->add_option("--report-format", report_format, "report printed to stdout: json or table")
	    ->check(CLI::IsMember({"json", "table"}));
	run->add_flag("--dump-dataflow", options.dump_dataflow, "write the dataflow graph as DOT");

	CLI11_PARSE(app, argc, argv);

	try {
		alice::RunConfig config = alice::load_config(config_path);
		alice::RunReport report = alice::run_flow(config, options);
		std::cout << alice::emit_report(report, report_format == "json" ? alice::ReportFormat::Json
									       : alice::ReportFormat::Table);
		return alice::flow_status_exit_code(report.status);
	} catch (const alice::FlowError &e) {
		std::cerr << "error: " << e.what() << "\n";
		return 1;
	} catch (const std::exception &e) {
		std::cerr << "error: " << e.what() << "\n";
		return 1;
	}
}
