// Wire types mirroring the session service JSON payloads.

export interface HeadingNode {
  heading: string;
  children: HeadingNode[];
}

export interface ImageRef {
  label: string;
  url: string;
}

export type Screen =
  | { kind: "welcome"; text: string }
  | { kind: "results"; titles: string[] }
  | { kind: "sections"; title: string; headings: HeadingNode[] }
  | {
      kind: "section_summary";
      heading: string;
      summary_sentences: string[];
      image: ImageRef | null;
      child_headings: string[];
    };

export interface Reply {
  speech: string;
  screen: Screen;
  turn_outcome: "answered" | "clarified" | "failed";
}

export interface Metrics {
  total_interactions: number;
  successful: number;
  unsuccessful: number;
  total_time: number;
}

export interface CreateSessionResponse {
  session_id: string;
  reply: Reply;
}

export interface UtteranceResponse {
  reply: Reply;
  state: { kind: string } & Record<string, unknown>;
  screen: Screen;
  metrics: Metrics;
}

export interface ChatEntry {
  who: "user" | "assistant";
  text: string;
  failed?: boolean;
}

export interface ViewModel {
  session_id: string | null;
  chat: ChatEntry[];
  screen: Screen | null;
  metrics: Metrics | null;
  pending: boolean;
  error: string | null;
}
