// Payload shapes served by the positioning service (see its /docs page).

export interface XY {
  x: number;
  y: number;
}

export interface FramePayload {
  width_m: number;
  height_m: number;
}

export interface NodePayload {
  id: string;
  kind: string;
  lat: number;
  lon: number;
  floor: number;
  x: number | null;
  y: number | null;
}

export interface EdgePayload {
  a: string;
  b: string;
  weight_m: number;
}

export interface TransmitterPayload {
  ap_name: string;
  x: number;
  y: number;
}

export interface MapPayload {
  radio_map: {
    floor_dbm: number;
    fingerprints: number;
    access_points: number;
  };
  graph: {
    nodes: NodePayload[];
    edges: EdgePayload[];
  };
  frame: FramePayload;
  simulated: boolean;
  scenario: {
    extent: FramePayload;
    grid_m: number;
    transmitters: TransmitterPayload[];
  } | null;
}

export interface ReadingPayload {
  bssid: string;
  ssid: string;
  rssi_dbm: number;
}

export interface SimScanPayload {
  readings: ReadingPayload[];
  true_position: XY;
  scan_index: number;
}

export interface LocatePayload {
  point: {
    lat: number;
    lon: number;
    floor: number;
    x: number | null;
    y: number | null;
  };
  method: string;
  neighbors: { location_id: string; signal_distance_db: number }[];
}

export interface RoutePayload {
  nodes: NodePayload[];
  total_m: number;
}
