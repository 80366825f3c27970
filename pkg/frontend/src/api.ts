import { MaskBuffer } from "./mask.js";
import type { EventImageData, EventSummary } from "./types.js";

// Typed client for the labeling service JSON API. Works in the browser and
// under Node (integration tests); both provide fetch/atob/btoa globally.

function base64ToBytes(b64: string): Uint8Array {
  const bin = atob(b64);
  const bytes = new Uint8Array(bin.length);
  for (let i = 0; i < bin.length; i++) bytes[i] = bin.charCodeAt(i);
  return bytes;
}

function bytesToBase64(bytes: Uint8Array): string {
  let bin = "";
  const chunk = 0x8000;
  for (let i = 0; i < bytes.length; i += chunk) {
    bin += String.fromCharCode(...bytes.subarray(i, i + chunk));
  }
  return btoa(bin);
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function asJson(resp: Response): Promise<any> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      detail = (await resp.json()).error ?? detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return resp.json();
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  async listEvents(): Promise<EventSummary[]> {
    return asJson(await fetch(`${this.baseUrl}/api/events`));
  }

  async getImage(id: string): Promise<EventImageData> {
    const doc = await asJson(await fetch(`${this.baseUrl}/api/events/${id}/image`));
    const bytes = base64ToBytes(doc.data_base64);
    return {
      id: doc.id,
      width: doc.width,
      height: doc.height,
      amplitudes: new Float32Array(bytes.buffer, 0, doc.width * doc.height),
      ampMin: doc.amp_min,
      ampMax: doc.amp_max,
    };
  }

  // null when the event has no saved mask yet
  async getMask(id: string): Promise<MaskBuffer | null> {
    const resp = await fetch(`${this.baseUrl}/api/events/${id}/mask`);
    if (resp.status === 404) return null;
    const doc = await asJson(resp);
    return new MaskBuffer(doc.width, doc.height, base64ToBytes(doc.data_base64));
  }

  async putMask(id: string, mask: MaskBuffer): Promise<void> {
    const resp = await fetch(`${this.baseUrl}/api/events/${id}/mask`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        width: mask.width,
        height: mask.height,
        data_base64: bytesToBase64(mask.data),
      }),
    });
    await asJson(resp);
  }
}
