#include "sortcell/plc/ladder_json.hpp"

namespace sortcell::plc {

namespace {

// Start and Stop pushbutton points (.0/.1) and the conveyor output point are
// not documented for the cell; the rest follow the wiring list.
constexpr std::string_view kProgram = R"json({
  "name": "SORTCELL",
  "tags": [
    {"name": "Start_PB",       "address": "Local:1:I.Data.0",  "kind": "local_input"},
    {"name": "Stop_PB",        "address": "Local:1:I.Data.1",  "kind": "local_input"},
    {"name": "Fault_Reset_PB", "address": "Local:1:I.Data.2",  "kind": "local_input"},
    {"name": "Red_Sel_PB",     "address": "Local:1:I.Data.4",  "kind": "local_input"},
    {"name": "Blue_Sel_PB",    "address": "Local:1:I.Data.5",  "kind": "local_input"},
    {"name": "Green_Sel_PB",   "address": "Local:1:I.Data.6",  "kind": "local_input"},
    {"name": "Beam",           "address": "Local:1:I.Data.14", "kind": "local_input"},

    {"name": "HMI_Start",    "address": "HMI.Start",    "kind": "hmi_input"},
    {"name": "HMI_Stop",     "address": "HMI.Stop",     "kind": "hmi_input"},
    {"name": "HMI_Red",      "address": "HMI.Red",      "kind": "hmi_input"},
    {"name": "HMI_Green",    "address": "HMI.Green",    "kind": "hmi_input"},
    {"name": "HMI_Blue",     "address": "HMI.Blue",     "kind": "hmi_input"},
    {"name": "HMI_Override", "address": "HMI.Override", "kind": "hmi_input"},

    {"name": "Enable",      "address": "Enable",      "kind": "internal"},
    {"name": "PartPresent", "address": "PartPresent", "kind": "internal"},
    {"name": "ScanAck",     "address": "ScanAck",     "kind": "internal"},
    {"name": "ColorMatch",  "address": "ColorMatch",  "kind": "internal"},
    {"name": "FR_Ons",      "address": "FR_Ons",      "kind": "internal"},
    {"name": "FR_Pulse",    "address": "FR_Pulse",    "kind": "internal"},

    {"name": "ConveyorRun", "address": "Local:2:O.Data.0", "kind": "local_output"},

    {"name": "Robot_Cmd_Enabled",  "address": "ROBOT:I.Data[0].1",  "kind": "robot_input", "alias": "Cmd enabled"},
    {"name": "Robot_System_Ready", "address": "ROBOT:I.Data[0].2",  "kind": "robot_input", "alias": "System ready"},
    {"name": "Robot_Prg_Running",  "address": "ROBOT:I.Data[0].3",  "kind": "robot_input", "alias": "Prg running"},
    {"name": "Robot_Prg_Paused",   "address": "ROBOT:I.Data[0].4",  "kind": "robot_input", "alias": "Prg paused"},
    {"name": "Robot_Motion_Held",  "address": "ROBOT:I.Data[0].5",  "kind": "robot_input", "alias": "Motion held"},
    {"name": "Robot_Fault",        "address": "ROBOT:I.Data[0].6",  "kind": "robot_input", "alias": "Fault"},
    {"name": "Robot_At_Perch",     "address": "ROBOT:I.Data[0].7",  "kind": "robot_input", "alias": "At perch"},
    {"name": "Robot_TP_Enabled",   "address": "ROBOT:I.Data[0].8",  "kind": "robot_input", "alias": "TP enabled"},
    {"name": "Robot_Red",          "address": "ROBOT:I.Data[0].10", "kind": "robot_input", "alias": "Red"},
    {"name": "Robot_Green",        "address": "ROBOT:I.Data[0].11", "kind": "robot_input", "alias": "Green"},
    {"name": "Robot_Blue",         "address": "ROBOT:I.Data[0].12", "kind": "robot_input", "alias": "Blue"},
    {"name": "Robot_Conveyor_Fwd", "address": "ROBOT:I.Data[0].13", "kind": "robot_input", "alias": "Conveyor fwd"},
    {"name": "Robot_Scan_Done",    "address": "ROBOT:I.Data[1].1",  "kind": "robot_input", "alias": "Scan Done"},

    {"name": "Robot_IMSTP",          "address": "ROBOT:O.Data[0].0", "kind": "robot_output", "alias": "IMSTP"},
    {"name": "Robot_HOLD",           "address": "ROBOT:O.Data[0].1", "kind": "robot_output", "alias": "HOLD"},
    {"name": "Robot_SFSPD",          "address": "ROBOT:O.Data[0].2", "kind": "robot_output", "alias": "SFSPD"},
    {"name": "Robot_Stop",           "address": "ROBOT:O.Data[0].3", "kind": "robot_output", "alias": "Stop"},
    {"name": "Robot_Fault_Reset",    "address": "ROBOT:O.Data[0].4", "kind": "robot_output", "alias": "Fault Reset"},
    {"name": "Robot_Part_Match",     "address": "ROBOT:O.Data[0].6", "kind": "robot_output", "alias": "Part match"},
    {"name": "Robot_Enable",         "address": "ROBOT:O.Data[0].7", "kind": "robot_output", "alias": "Enable"},
    {"name": "Robot_Scan_Program",   "address": "ROBOT:O.Data[0].8", "kind": "robot_output", "alias": "Scan Program"},
    {"name": "Robot_Remove_Program", "address": "ROBOT:O.Data[0].9", "kind": "robot_output", "alias": "Remove Program"}
  ],
  "timers": [
    {"name": "T1",   "preset_ms": 200},
    {"name": "T_FR", "preset_ms": 500}
  ],
  "rungs": [
    {"number": 0, "comment": "Enable seal-in",
     "condition": [{"parallel": [{"xic": "Start_PB"}, {"xic": "HMI_Start"}, {"xic": "Enable"}]},
                   {"xio": "Stop_PB"}, {"xio": "HMI_Stop"}],
     "outputs": [{"ote": "Enable"}]},

    {"number": 1, "comment": "Robot UOP constants, enable follows the cell",
     "condition": [],
     "outputs": [{"ote": "Robot_IMSTP"}, {"ote": "Robot_SFSPD"}, {"ote": "Robot_Stop"},
                 {"ote": "Robot_Enable", "when": {"xic": "Enable"}}]},

    {"number": 2, "comment": "Fault reset pulse",
     "condition": [],
     "outputs": [{"otl": "FR_Pulse", "when": [{"xic": "Fault_Reset_PB"}, {"ons": "FR_Ons"}]},
                 {"ton": "T_FR", "when": {"xic": "FR_Pulse"}},
                 {"ote": "Robot_Fault_Reset", "when": [{"xic": "FR_Pulse"}, {"xio": "T_FR.DN"}]},
                 {"otu": "FR_Pulse", "when": {"xic": "T_FR.DN"}}]},

    {"number": 3, "comment": "Part present latch",
     "condition": {"xic": "Beam"},
     "outputs": [{"otl": "PartPresent"}]},

    {"number": 4, "comment": "Conveyor run",
     "condition": [{"xic": "Enable"},
                   {"parallel": [[{"xio": "PartPresent"}, {"xio": "Robot_Fault"}],
                                 {"xic": "Robot_Conveyor_Fwd"}]}],
     "outputs": [{"ote": "ConveyorRun"}]},

    {"number": 5, "comment": "Scan request",
     "condition": [{"xic": "Enable"}, {"xic": "PartPresent"}, {"xio": "Robot_Scan_Done"}, {"xio": "ScanAck"}],
     "outputs": [{"ote": "Robot_Scan_Program"}]},

    {"number": 6, "comment": "Verdict delay",
     "condition": {"xic": "Robot_Scan_Done"},
     "outputs": [{"ton": "T1"}, {"otl": "ScanAck"}]},

    {"number": 7, "comment": "Color match",
     "condition": {"parallel": [
       [{"xic": "Robot_Red"}, {"parallel": [{"xic": "Red_Sel_PB"}, {"xic": "HMI_Red"}]}],
       [{"xic": "Robot_Green"}, {"parallel": [{"xic": "Green_Sel_PB"}, {"xic": "HMI_Green"}]},
        {"parallel": [{"xio": "HMI_Override"}, {"xio": "Robot_Blue"}]}],
       [{"xic": "Robot_Blue"}, {"parallel": [{"xic": "Blue_Sel_PB"}, {"xic": "HMI_Blue"}]}]]},
     "outputs": [{"ote": "ColorMatch"}, {"ote": "Robot_Part_Match", "when": {"xic": "T1.DN"}}]},

    {"number": 8, "comment": "Remove",
     "condition": [{"xic": "T1.DN"}, {"xio": "ColorMatch"}],
     "outputs": [{"ote": "Robot_Remove_Program"}]},

    {"number": 9, "comment": "Release latch after the part leaves",
     "condition": [{"xio": "Beam"}, {"xic": "ScanAck"}, {"xio": "Robot_Scan_Done"}],
     "outputs": [{"otu": "PartPresent"}, {"otu": "ScanAck"}]}
  ]
})json";

}  // namespace

std::string_view default_program_json() noexcept { return kProgram; }

const LadderProgram& default_program() {
  static const LadderProgram program = load_ladder(kProgram);
  return program;
}

}  // namespace sortcell::plc
