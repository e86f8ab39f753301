// Keyboard teleoperation over the WebSocket: one action per keypress, one
// state message back per action. Reconnect resets the pending recording.

export type TeleopAction = "up" | "down" | "left" | "right" | "stay";

export interface TeleopEvents {
  onOpen(state: [number, number]): void;
  onState(state: [number, number]): void;
  onError(message: string): void;
  onClose(): void;
}

export const KEY_ACTIONS: Record<string, TeleopAction> = {
  ArrowUp: "up",
  ArrowDown: "down",
  ArrowLeft: "left",
  ArrowRight: "right",
  " ": "stay",
};

export class Teleop {
  private ws: WebSocket | null = null;
  private url: string;
  private events: TeleopEvents;
  private first = true;

  constructor(url: string, events: TeleopEvents) {
    this.url = url;
    this.events = events;
  }

  connect(): void {
    this.first = true;
    this.ws = new WebSocket(this.url);
    this.ws.onmessage = (event) => {
      const msg = JSON.parse(event.data);
      if (msg.error) {
        this.events.onError(msg.error);
        return;
      }
      if (this.first) {
        this.first = false;
        this.events.onOpen(msg.state);
      } else {
        this.events.onState(msg.state);
      }
    };
    this.ws.onclose = () => this.events.onClose();
  }

  send(action: TeleopAction): boolean {
    if (!this.ws || this.ws.readyState !== WebSocket.OPEN) return false;
    this.ws.send(JSON.stringify({ action }));
    return true;
  }

  /** Fresh pending trajectory at the start cell. */
  reset(): void {
    this.ws?.close();
    this.connect();
  }
}
